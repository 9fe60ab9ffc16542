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

#include "tascade/apps.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

#include "tascade/reference.hpp"

namespace tascade {

namespace {

constexpr std::string_view kNames[] = {"bfs", "sssp", "wcc", "pagerank", "spmv", "histogram"};

bool is_min(WorkloadKind k) {
  return k == WorkloadKind::kBfs || k == WorkloadKind::kSssp || k == WorkloadKind::kWcc;
}

CsrGraph prepare(WorkloadKind kind, const CsrGraph& input, const WorkloadParams& params) {
  switch (kind) {
    case WorkloadKind::kWcc: return symmetrize(input);
    case WorkloadKind::kSssp:
    case WorkloadKind::kSpmv: {
      CsrGraph g = input;
      if (!g.weighted()) assign_random_weights(g, params.seed);
      return g;
    }
    default: return input;
  }
}

}  // namespace

WorkloadKind parse_workload(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kNames); ++i) {
    if (name == kNames[i]) return static_cast<WorkloadKind>(i);
  }
  throw std::invalid_argument("unknown workload '" + std::string(name) + "'");
}

std::string_view to_string(WorkloadKind k) { return kNames[static_cast<std::size_t>(k)]; }

Word pagerank_base(std::uint32_t damping_pct) {
  return static_cast<Word>((std::uint64_t{100 - damping_pct} * kRankOne) / 100);
}

Word pagerank_contribution(Word rank, std::uint32_t damping_pct, std::uint64_t out_degree) {
  return static_cast<Word>((std::uint64_t{rank} * damping_pct / 100) / out_degree);
}

Workload::Workload(WorkloadKind kind, const CsrGraph& input, WorkloadParams params)
    : Workload(kind, prepare(kind, input, params), params, 0) {}

Workload::Workload(WorkloadKind kind, CsrGraph graph, WorkloadParams params, int)
    : kind_(kind), params_(params), graph_(std::move(graph)) {
  graph_.validate();
  if (params_.edges_per_task == 0 || params_.elements_per_task == 0) {
    throw std::invalid_argument("edges_per_task and elements_per_task must be positive");
  }
  if (params_.damping_pct > 100) throw std::invalid_argument("damping_pct must be <= 100");
  if (kind_ == WorkloadKind::kSpmv) {
    std::mt19937_64 rng(params_.seed);
    x_.resize(graph_.num_vertices);
    for (auto& v : x_) v = static_cast<Word>(rng() % 16);
  }
  vertex_part_ = partition(graph_.num_vertices, 1);
  edge_part_ = partition(graph_.num_edges(), 1);
}

Workload Workload::histogram(std::vector<std::uint64_t> input, std::uint64_t bins, WorkloadParams params) {
  CsrGraph g;
  g.num_vertices = bins;
  g.row_offsets.assign(bins + 1, input.size());
  g.row_offsets[0] = 0;
  if (bins == 0 && !input.empty()) throw std::invalid_argument("histogram needs at least one bin");
  if (bins == 0) g.row_offsets = {0};
  g.col_indices = std::move(input);
  return Workload(WorkloadKind::kHistogram, std::move(g), params, 0);
}

std::uint64_t Workload::frontier_length() const {
  return kind_ == WorkloadKind::kHistogram ? graph_.num_edges() : graph_.num_vertices;
}

ReduceOp Workload::reduce_op() const { return is_min(kind_) ? ReduceOp::min() : ReduceOp::add(); }

Word Workload::identity() const { return is_min(kind_) ? kInfinity : 0; }

WritePolicy Workload::natural_policy() const {
  return is_min(kind_) ? WritePolicy::kWriteThrough : WritePolicy::kWriteBack;
}

std::uint32_t Workload::num_epochs() const {
  return kind_ == WorkloadKind::kPageRank ? params_.pagerank_epochs : 1;
}

std::vector<TaskDescriptor> Workload::tasks(bool proxies) const {
  const std::uint32_t k = params_.edges_per_task;
  std::vector<TaskDescriptor> out;
  TaskDescriptor t1{kFrontier};
  if (kind_ == WorkloadKind::kHistogram) {
    t1.max_emissions[kReduce] = params_.elements_per_task;
    if (proxies) t1.max_emissions[kProxy] = params_.elements_per_task;
  } else {
    t1.max_emissions[kEdge] = 1;
  }
  out.push_back(t1);
  if (kind_ != WorkloadKind::kHistogram) {
    TaskDescriptor t2{kEdge};
    t2.max_emissions[kEdge] = 1;
    t2.max_emissions[kReduce] = k;
    if (proxies) t2.max_emissions[kProxy] = k;
    out.push_back(t2);
  }
  out.push_back(TaskDescriptor{kReduce});
  if (proxies) {
    TaskDescriptor t3p{kProxy};
    t3p.may_touch_pcache = true;
    out.push_back(t3p);
  }
  return out;
}

void Workload::begin_epoch(std::uint32_t epoch, const std::function<void(std::uint64_t)>& seed) {
  const std::uint64_t v_count = graph_.num_vertices;
  switch (kind_) {
    case WorkloadKind::kBfs:
    case WorkloadKind::kSssp:
      if (params_.search_key >= v_count) {
        if (v_count == 0) {
          reduce_.clear();
          return;
        }
        throw std::invalid_argument("search key " + std::to_string(params_.search_key) + " out of range");
      }
      reduce_.assign(v_count, kInfinity);
      reduce_[params_.search_key] = 0;
      seed(params_.search_key);
      break;
    case WorkloadKind::kWcc:
      reduce_.resize(v_count);
      for (std::uint64_t v = 0; v < v_count; ++v) {
        reduce_[v] = static_cast<Word>(v);
        seed(v);
      }
      break;
    case WorkloadKind::kPageRank:
      if (epoch == 0) rank_.assign(v_count, kRankOne);
      reduce_.assign(v_count, pagerank_base(params_.damping_pct));
      for (std::uint64_t v = 0; v < v_count; ++v) {
        if (graph_.degree(v) > 0) seed(v);
      }
      break;
    case WorkloadKind::kSpmv:
      reduce_.assign(v_count, 0);
      for (std::uint64_t v = 0; v < v_count; ++v) {
        if (graph_.degree(v) > 0) seed(v);
      }
      break;
    case WorkloadKind::kHistogram:
      reduce_.assign(v_count, 0);
      for (std::uint64_t t = 0; t < edge_part_.num_tiles; ++t) {
        const std::uint64_t begin = edge_part_.chunk_begin(t);
        const std::uint64_t end = begin + edge_part_.chunk_length(t);
        for (std::uint64_t i = begin; i < end; i += params_.elements_per_task) seed(i);
      }
      break;
  }
}

void Workload::end_epoch(std::uint32_t) {
  if (kind_ == WorkloadKind::kPageRank) rank_ = reduce_;
  ++epochs_done_;
}

void Workload::frontier_task(TaskContext& ctx, std::uint64_t index) {
  if (kind_ == WorkloadKind::kHistogram) {
    ctx.require_owned(edge_part_, index);
    const std::uint64_t owner = edge_part_.owner(index);
    const std::uint64_t chunk_end = edge_part_.chunk_begin(owner) + edge_part_.chunk_length(owner);
    const std::uint64_t end = std::min<std::uint64_t>(index + params_.elements_per_task, chunk_end);
    for (std::uint64_t j = index; j < end; ++j) ctx.emit_reduce(graph_.col_indices[j], 1);
    ctx.touch_sram(static_cast<std::uint32_t>(8 * (end - index)));
    return;
  }
  ctx.require_owned(vertex_part_, index);
  const std::uint64_t deg = graph_.degree(index);
  ctx.touch_sram(4 + 16);
  if (deg == 0) return;
  Word value = 0;
  switch (kind_) {
    case WorkloadKind::kPageRank: value = pagerank_contribution(rank_[index], params_.damping_pct, deg); break;
    case WorkloadKind::kSpmv: value = x_[index]; break;
    default: value = reduce_[index]; break;
  }
  ctx.emit_edge_task(graph_.row_offsets[index], graph_.row_offsets[index + 1], value);
}

Word Workload::edge_value(Word source_value, std::uint64_t edge) const {
  switch (kind_) {
    case WorkloadKind::kSssp: {
      const std::uint64_t sum = std::uint64_t{source_value} + graph_.weights[edge];
      return sum >= kInfinity ? kInfinity - 1 : static_cast<Word>(sum);
    }
    case WorkloadKind::kBfs: return source_value + 1;
    case WorkloadKind::kSpmv: return graph_.weights[edge] * source_value;
    default: return source_value;
  }
}

void Workload::edge_task(TaskContext& ctx, const Invocation& inv) {
  const std::uint64_t begin = inv.index;
  const std::uint64_t end = inv.payload[0];
  const Word value = static_cast<Word>(inv.payload[1]);
  ctx.require_owned(edge_part_, begin);
  const std::uint64_t owner = edge_part_.owner(begin);
  const std::uint64_t chunk_end = edge_part_.chunk_begin(owner) + edge_part_.chunk_length(owner);
  const std::uint64_t stop = std::min({end, chunk_end, begin + params_.edges_per_task});
  for (std::uint64_t e = begin; e < stop; ++e) ctx.emit_reduce(graph_.col_indices[e], edge_value(value, e));
  ctx.touch_sram(static_cast<std::uint32_t>((stop - begin) * (graph_.weighted() ? 12 : 8)));
  if (stop < end) {
    if (stop < chunk_end) {
      ctx.requeue({stop, {end, value}});
    } else {
      ctx.emit_edge_task(stop, end, value);
    }
  }
}

bool Workload::owner_reduce(TaskContext& ctx, std::uint64_t index, Word value) {
  ctx.require_owned(vertex_part_, index);
  ctx.touch_sram(4);
  Word& slot = reduce_[index];
  if (is_min(kind_)) {
    if (value >= slot) return false;
    slot = value;
    ctx.push_frontier(index);
    return true;
  }
  slot += value;
  return true;
}

std::span<const Word> Workload::result() const {
  if (kind_ == WorkloadKind::kPageRank) return rank_;
  return reduce_;
}

FrontierStats Workload::frontier_stats() const {
  FrontierStats s;
  switch (kind_) {
    case WorkloadKind::kBfs:
    case WorkloadKind::kSssp:
      for (std::uint64_t v = 0; v < reduce_.size(); ++v) {
        if (reduce_[v] != kInfinity) s.edges_traversed += graph_.degree(v);
      }
      break;
    case WorkloadKind::kPageRank: s.edges_traversed = graph_.num_edges() * epochs_done_; break;
    default: s.edges_traversed = graph_.num_edges(); break;
  }
  return s;
}

std::vector<Word> Workload::reference() const {
  switch (kind_) {
    case WorkloadKind::kBfs: return reference::bfs(graph_, params_.search_key);
    case WorkloadKind::kSssp: return reference::sssp(graph_, params_.search_key);
    case WorkloadKind::kWcc: return reference::wcc(graph_);
    case WorkloadKind::kPageRank: return reference::pagerank(graph_, params_.pagerank_epochs, params_.damping_pct);
    case WorkloadKind::kSpmv: return reference::spmv(graph_, x_);
    case WorkloadKind::kHistogram: return reference::histogram(graph_.col_indices, graph_.num_vertices);
  }
  return {};
}

}  // namespace tascade
