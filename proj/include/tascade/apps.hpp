/*
 * Copyright 2026 The Tascade Simulator Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "tascade/common.hpp"
#include "tascade/graph.hpp"
#include "tascade/message.hpp"
#include "tascade/metrics.hpp"
#include "tascade/proxy_cache.hpp"
#include "tascade/tile.hpp"

namespace tascade {

enum class WorkloadKind { kBfs, kSssp, kWcc, kPageRank, kSpmv, kHistogram };

WorkloadKind parse_workload(std::string_view name);
std::string_view to_string(WorkloadKind k);

struct WorkloadParams {
  std::uint64_t search_key = 0;
  std::uint32_t pagerank_epochs = 10;
  std::uint32_t damping_pct = 85;
  std::uint32_t edges_per_task = 16;     // T2 batch before it re-queues itself
  std::uint32_t elements_per_task = 16;  // Histogram T1 block
  std::uint64_t seed = 1;                // weights and SPMV input vector
};

/// Services a handler may use while it runs on a tile. Implemented by the
/// simulator; every call is attributed to the executing tile.
class TaskContext {
 public:
  virtual ~TaskContext() = default;
  virtual TileId tile() const = 0;
  /// T2 over edges [begin, end) at the owner of `begin`.
  virtual void emit_edge_task(std::uint64_t begin, std::uint64_t end, Word value) = 0;
  /// Reduction update toward the regional proxy (or the owner without proxies).
  virtual void emit_reduce(std::uint64_t index, Word value) = 0;
  /// Puts a continuation back at the head of the running task's queue.
  virtual void requeue(const Invocation& inv) = 0;
  virtual void push_frontier(std::uint64_t index) = 0;
  /// Hard fault unless this tile owns `index` of the array split by `part`.
  virtual void require_owned(const Partition& part, std::uint64_t index) const = 0;
  virtual void touch_sram(std::uint32_t bytes) = 0;
};

/// One of the six workloads decomposed into data-local tasks:
///   T1 (kFrontier) explores an owned vertex / input block,
///   T2 (kEdge) walks a slice of an edge range at the edge owner,
///   T3 (kReduce) reduces into the owner's array,
///   T3' (kProxy) reduces into the regional proxy copy via the P-cache.
class Workload {
 public:
  Workload(WorkloadKind kind, const CsrGraph& input, WorkloadParams params);
  /// Histogram over an explicit input array with `bins` bins.
  static Workload histogram(std::vector<std::uint64_t> input, std::uint64_t bins, WorkloadParams params = {});

  WorkloadKind kind() const { return kind_; }
  const WorkloadParams& params() const { return params_; }
  /// The graph the tasks traverse (symmetrized for WCC, weighted for SSSP/SPMV).
  const CsrGraph& graph() const { return graph_; }
  std::span<const Word> input_vector() const { return x_; }

  std::uint64_t reduction_length() const { return graph_.num_vertices; }
  /// Length of the array whose chunks T1 iterates (vertices, or histogram input).
  std::uint64_t frontier_length() const;
  /// Length of the array T2 iterates (edges, or histogram input).
  std::uint64_t edge_array_length() const { return graph_.num_edges(); }

  ReduceOp reduce_op() const;
  Word identity() const;
  WritePolicy natural_policy() const;
  std::uint32_t num_epochs() const;

  std::vector<TaskDescriptor> tasks(bool proxies) const;

  void begin_epoch(std::uint32_t epoch, const std::function<void(std::uint64_t)>& seed);
  void end_epoch(std::uint32_t epoch);

  void frontier_task(TaskContext& ctx, std::uint64_t index);
  void edge_task(TaskContext& ctx, const Invocation& inv);
  /// Returns true if the update changed the owner's value.
  bool owner_reduce(TaskContext& ctx, std::uint64_t index, Word value);

  std::span<const Word> result() const;
  /// Owner-side reduction array currently being accumulated.
  std::span<const Word> reduction_array() const { return reduce_; }
  FrontierStats frontier_stats() const;

  /// Sequential reference result for the same prepared inputs.
  std::vector<Word> reference() const;

  void set_partitions(const Partition& vertices, const Partition& edges) {
    vertex_part_ = vertices;
    edge_part_ = edges;
  }

 private:
  Workload(WorkloadKind kind, CsrGraph graph, WorkloadParams params, int);

  Word edge_value(Word source_value, std::uint64_t edge) const;

  WorkloadKind kind_;
  WorkloadParams params_;
  CsrGraph graph_;
  std::vector<Word> x_;       // SPMV input vector
  std::vector<Word> reduce_;  // dist / level / label / rank-next / y / counts
  std::vector<Word> rank_;    // PageRank current ranks
  Partition vertex_part_;
  Partition edge_part_;
  std::uint32_t epochs_done_ = 0;
};

/// Fixed-point PageRank constants (Q16.16).
inline constexpr Word kRankOne = 1u << 16;
Word pagerank_base(std::uint32_t damping_pct);
Word pagerank_contribution(Word rank, std::uint32_t damping_pct, std::uint64_t out_degree);

}  // namespace tascade
