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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tascade/apps.hpp"
#include "tascade/graph.hpp"
#include "tascade/simulator.hpp"

namespace tascade {

/// Raised with every violated constraint of a run configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct DatasetSpec {
  enum class Kind { kRmat, kFile, kEdgeList };
  Kind kind = Kind::kRmat;
  std::uint32_t scale = 10;
  std::uint32_t edge_factor = 16;
  std::uint64_t seed = 1;
  std::string path;
};

struct RunConfig {
  std::uint32_t width = 8;
  std::uint32_t height = 8;
  Topology topology = Topology::kTorus;
  std::uint32_t chip_pane = 32;

  WorkloadKind workload = WorkloadKind::kBfs;
  WorkloadParams params;
  DatasetSpec dataset;

  Mode mode = Mode::kTascadeSelective;
  std::optional<std::uint32_t> region_width;  // nullopt = auto
  std::uint64_t pcache_max = 16384;           // P_cache_max in elements
  std::uint64_t ratio_c = 16;
  std::optional<std::uint64_t> pcache_capacity;  // explicit override
  std::optional<double> pcache_budget;           // fraction of the padded local proxy fraction
  std::optional<WritePolicy> policy;

  std::size_t iq_capacity = 64;
  std::size_t oq_capacity = 32;
  std::uint32_t buffer_flits = 8;
  std::uint32_t router_delay = 1;
  std::uint32_t link_latency = 1;
  std::uint32_t boundary_latency = 20;
  std::array<std::uint32_t, kNumChannels> task_cost{5, 5, 5, 5};
  Cycle barrier_latency = 0;
  Cycle activity_window = 0;
  Cycle max_idle_cycles = 100000;

  std::string energy_profile = "paper-like-7nm";
  double frequency_hz = 1e9;
  std::uint64_t seed = 1;

  /// Parses and validates; throws ConfigError listing every problem.
  static RunConfig from_json(const nlohmann::json& j, bool allow_large = false);
  nlohmann::json to_json() const;

  /// Enumerates constraint violations (empty when valid).
  std::vector<std::string> validate(bool allow_large = false) const;
};

/// Region width and P-cache capacity after auto sizing.
struct ResolvedSizing {
  std::uint32_t region_width = 0;
  std::uint32_t w_min = 0;
  std::uint64_t local_fraction = 0;  // elements per tile, unpadded
  std::uint64_t pcache_capacity = 0;
  bool auto_width = false;
};

/// Auto width: max(16, W_min) when that leaves at least four regions,
/// otherwise the largest of W_min and half the shorter grid side.
ResolvedSizing resolve_sizing(const RunConfig& cfg, std::uint64_t reduction_length);

SimConfig make_sim_config(const RunConfig& cfg, const ResolvedSizing& sizing);

}  // namespace tascade
