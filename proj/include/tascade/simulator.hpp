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

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "tascade/apps.hpp"
#include "tascade/geometry.hpp"
#include "tascade/metrics.hpp"
#include "tascade/noc.hpp"
#include "tascade/tile.hpp"

namespace tascade {

enum class Mode {
  kNoProxy,
  kProxyMergeOwner,
  kProxyAlwaysCascade,
  kTascadeSelective,
  kSyncMerge,
  kSyncCascade,
};

inline constexpr std::array<Mode, 6> kAllModes = {Mode::kNoProxy,        Mode::kProxyMergeOwner,
                                                  Mode::kProxyAlwaysCascade, Mode::kTascadeSelective,
                                                  Mode::kSyncMerge,      Mode::kSyncCascade};

Mode parse_mode(std::string_view name);
std::string_view to_string(Mode m);

struct ModeTraits {
  bool proxies = false;
  CascadeMode cascade = CascadeMode::kNone;
  bool sync = false;  // barrier, then merge all proxy data
};

ModeTraits mode_traits(Mode m);

struct SimConfig {
  std::uint32_t width = 8;
  std::uint32_t height = 8;
  std::uint32_t region_width = 4;
  Mode mode = Mode::kTascadeSelective;
  NetworkConfig network;  // `cascade` is derived from the mode
  std::size_t iq_capacity = 64;
  std::size_t oq_capacity = 32;
  std::array<std::uint32_t, kNumChannels> task_cost{5, 5, 5, 5};
  std::uint64_t pcache_capacity = 16384;  // elements, clamped to the padded fraction
  std::optional<WritePolicy> policy;      // default: the workload's natural policy
  Cycle barrier_latency = 0;              // 0 = width + height
  Cycle activity_window = 0;              // 0 = no timeline
  Cycle max_idle_cycles = 100000;
  Cycle max_cycles = 0;                   // 0 = unbounded
};

enum class Phase { kAsync, kCompute, kMerge, kDone };

/// The tiled machine: one Network plus a TileState per tile, stepped one
/// cycle at a time until global quiescence.
class Simulator : private DeliverySink, private TaskContext {
 public:
  Simulator(const SimConfig& config, Workload& workload);

  const SimConfig& config() const { return config_; }
  const GridGeometry& geometry() const { return geom_; }
  const Network& network() const { return network_; }
  const std::vector<TileState>& tiles() const { return tiles_; }
  const Partition& vertex_partition() const { return vertex_part_; }
  const Partition& edge_partition() const { return edge_part_; }
  WritePolicy policy() const { return policy_; }
  Cycle cycle() const { return cycle_; }
  Phase phase() const { return phase_; }
  std::uint32_t epoch() const { return epoch_; }

  /// Called after every simulated cycle.
  void set_observer(std::function<void(const Simulator&)> f) { observer_ = std::move(f); }

  /// Runs every epoch to completion. Throws SimulationFault on non-progress.
  void run();
  /// Advances one cycle; returns false once the run is complete.
  bool step();

  bool quiescent() const;
  MetricsLedger ledger() const;

  /// Reduction updates emitted by T1/T2 handlers.
  std::uint64_t updates_issued() const { return updates_issued_; }
  /// Reduction updates currently held in PU results, OQs, IQs or routers.
  std::uint64_t updates_in_transit() const;
  std::uint64_t pcache_filtered() const;
  std::uint64_t owner_updates() const { return owner_applied_ + owner_rejected_; }

 private:
  // DeliverySink
  bool can_accept(TileId tile, std::uint8_t channel) const override;
  void accept(TileId tile, std::uint8_t channel, const Message& msg, bool captured) override;
  bool iq_below_half(TileId tile, std::uint8_t channel) const override;

  // TaskContext
  TileId tile() const override { return current_; }
  void emit_edge_task(std::uint64_t begin, std::uint64_t end, Word value) override;
  void emit_reduce(std::uint64_t index, Word value) override;
  void requeue(const Invocation& inv) override;
  void push_frontier(std::uint64_t index) override;
  void require_owned(const Partition& part, std::uint64_t index) const override;
  void touch_sram(std::uint32_t bytes) override;

  void seed(std::uint64_t index);
  void mark_active(TileId tile) { active_tiles_[tile / 64] |= std::uint64_t{1} << (tile % 64); }
  void mark_all_active();
  bool tile_idle(const TileState& t) const;
  void start_epoch();
  void step_tile(TileState& t);
  void execute(TileState& t, std::uint8_t channel);
  void proxy_update(TileState& t, const Invocation& inv);
  Message make_message(std::uint8_t channel, std::uint64_t index, TileId dest, std::uint8_t words,
                       std::uint64_t p0, std::uint64_t p1 = 0) const;
  TileId vertex_owner(std::uint64_t index) const;
  bool phase_complete() const;
  void advance_phase();
  [[noreturn]] void fail_non_progress() const;

  SimConfig config_;
  Workload& workload_;
  GridGeometry geom_;
  ModeTraits traits_;
  Network network_;
  WritePolicy policy_;
  Partition vertex_part_;
  Partition edge_part_;
  Partition frontier_part_;
  std::vector<TaskDescriptor> tasks_;
  std::vector<TileState> tiles_;
  ActivityTimeline timeline_;

  Phase phase_ = Phase::kAsync;
  bool frontier_enabled_ = true;
  bool flush_enabled_ = true;
  std::uint32_t epoch_ = 0;
  Cycle cycle_ = 0;
  Cycle last_progress_ = 0;
  std::uint64_t barriers_ = 0;
  std::function<void(const Simulator&)> observer_;

  // Tiles that may have work this cycle; the others are idle by construction.
  std::vector<std::uint64_t> active_tiles_;
  bool tiles_idle_ = true;  // no queued work, busy PU or OQ entry on any stepped tile
  std::uint64_t frontier_total_ = 0;
  std::uint64_t dirty_total_ = 0;

  // Handler scratch.
  TileId current_ = 0;
  std::uint8_t current_channel_ = 0;
  std::uint32_t frontier_pushes_ = 0;
  std::uint32_t sram_bytes_ = 0;

  std::uint64_t updates_issued_ = 0;
  std::uint64_t owner_applied_ = 0;
  std::uint64_t owner_rejected_ = 0;
  std::uint64_t pcache_attempts_ = 0;
  std::uint64_t pcache_emissions_ = 0;
  std::uint64_t tasks_executed_ = 0;
};

}  // namespace tascade
