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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tascade/common.hpp"

namespace tascade {

struct TileCounters {
  std::uint64_t pu_active_cycles = 0;
  std::uint64_t router_active_cycles = 0;
  std::uint64_t iq_peak = 0;
  std::uint64_t tasks_executed = 0;
  std::uint64_t pcache_hits = 0;
  std::uint64_t pcache_misses = 0;
  std::uint64_t pcache_evictions = 0;
  std::uint64_t updates_filtered = 0;
  std::uint64_t updates_coalesced = 0;
  std::uint64_t sram_bytes = 0;
  std::array<std::uint64_t, kNumChannels> tasks_by_channel{};
};

struct GlobalCounters {
  std::uint64_t messages_injected = 0;
  std::uint64_t messages_delivered = 0;
  std::uint64_t messages_captured = 0;
  std::uint64_t flit_hops = 0;
  std::uint64_t boundary_flit_hops = 0;
  std::uint64_t total_cycles = 0;
  std::uint64_t tasks_executed = 0;
  std::uint64_t owner_updates_applied = 0;
  std::uint64_t owner_updates_rejected = 0;  // terminal filter at the owner
  std::uint64_t pcache_update_attempts = 0;
  std::uint64_t pcache_emissions = 0;
  std::uint64_t captures_declined_full = 0;
  std::uint64_t barriers = 0;
};

/// Per-tile PU and router activity, bucketed into fixed sampling windows.
class ActivityTimeline {
 public:
  ActivityTimeline() = default;
  ActivityTimeline(std::uint32_t width, std::uint32_t height, Cycle window);

  bool enabled() const { return window_ != 0; }
  Cycle window() const { return window_; }
  std::uint32_t width() const { return width_; }
  std::uint32_t height() const { return height_; }
  Cycle total_cycles() const { return total_cycles_; }
  std::size_t num_windows() const { return pu_.size(); }

  void record(TileId tile, Cycle now, bool pu_active, bool router_active);
  void finish(Cycle total_cycles);

  /// Active-cycle counts of sampling window `w`, one entry per tile.
  const std::vector<std::uint32_t>& pu_window(std::size_t w) const { return pu_[w]; }
  const std::vector<std::uint32_t>& router_window(std::size_t w) const { return router_[w]; }

  std::vector<std::byte> encode() const;
  static ActivityTimeline decode(const std::vector<std::byte>& bytes);

 private:
  void ensure(std::size_t w);

  std::uint32_t width_ = 0;
  std::uint32_t height_ = 0;
  Cycle window_ = 0;
  Cycle total_cycles_ = 0;
  std::vector<std::vector<std::uint32_t>> pu_;
  std::vector<std::vector<std::uint32_t>> router_;
};

struct MetricsLedger {
  std::vector<TileCounters> tiles;
  GlobalCounters global;
  ActivityTimeline timeline;
};

/// Work measure of a run: traversed edges, non-zeros, or input elements.
struct FrontierStats {
  std::uint64_t edges_traversed = 0;
};

/// E_t / (cycles / freq). Throws std::invalid_argument for zero cycles.
double compute_teps(const FrontierStats& stats, Cycle cycles, double freq_hz);

/// Energy coefficients. Only the chip-boundary figure is a published
/// value; the rest of the named profile are placeholders to calibrate.
struct EnergyModel {
  double pu_pj_per_cycle = 0;
  double sram_pj_per_byte = 0;
  double router_pj_per_flit_hop = 0;
  double boundary_pj_per_bit = 0;

  static EnergyModel paper_like_7nm() { return {1.0, 0.2, 0.15, 1.17}; }
};

/// Named profile lookup ("paper-like-7nm", "zero"); throws on unknown names.
EnergyModel energy_profile(std::string_view name);

struct EnergyBreakdown {
  double pu_j = 0;
  double sram_j = 0;
  double noc_j = 0;
  double boundary_j = 0;
  double total_j() const { return pu_j + sram_j + noc_j + boundary_j; }
};

inline constexpr std::uint32_t kFlitBits = 64;

EnergyBreakdown compute_energy(const MetricsLedger& ledger, const EnergyModel& model);

struct HeatmapFrame {
  Cycle begin = 0;
  Cycle end = 0;
  std::vector<double> pu;      // active fraction per tile, row-major
  std::vector<double> router;
};

/// Re-buckets the timeline into frames of `window` cycles (a multiple of the
/// sampling window); there are ceil(total_cycles / window) frames.
std::vector<HeatmapFrame> heatmap_frames(const ActivityTimeline& timeline, Cycle window);

/// Writes pu_NNNN / router_NNNN as .pgm and .csv under `dir`; returns the frame count.
std::size_t export_heatmap_frames(const ActivityTimeline& timeline, Cycle window, const std::filesystem::path& dir);

}  // namespace tascade
