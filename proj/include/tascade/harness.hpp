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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tascade/config.hpp"
#include "tascade/metrics.hpp"

namespace tascade {

/// Materializes the configured dataset (generated or loaded).
CsrGraph load_dataset(const DatasetSpec& spec);

struct RunOutcome {
  RunConfig config;
  ResolvedSizing sizing;
  nlohmann::json summary;
  std::vector<Word> result;
  MetricsLedger ledger;
};

/// One simulation. Library argument errors surface as ConfigError.
RunOutcome run_once(const RunConfig& cfg);
RunOutcome run_once(const RunConfig& cfg, const CsrGraph& graph);

/// summary.json, metrics.csv, result.bin and (when sampled) activity.bin.
void write_artifacts(const RunOutcome& out, const std::filesystem::path& dir);

std::string metrics_csv(const MetricsLedger& ledger, std::uint32_t grid_width);

/// "RES1", u64 count, then count u32 values, little-endian.
std::vector<std::byte> encode_result(std::span<const Word> values);
std::vector<Word> decode_result(std::span<const std::byte> bytes);

std::vector<std::byte> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes);

enum class SweepAxis { kMode, kRegionWidth, kPcacheBudget, kGridSize };
SweepAxis parse_sweep_axis(std::string_view name);
std::string_view to_string(SweepAxis a);

struct SweepRow {
  std::string value;
  std::uint64_t cycles = 0;
  std::uint64_t flit_hops = 0;
  double energy_j = 0;
  double speedup = 0;       // baseline cycles / cycles
  double traffic_ratio = 0; // flit_hops / baseline flit_hops
  double energy_ratio = 0;
  bool verified = false;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::kMode;
  std::vector<SweepRow> rows;
  std::optional<std::string> failure;  // set when a point aborted the sweep

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// Applies one axis value to a copy of `base`.
RunConfig apply_axis(const RunConfig& base, SweepAxis axis, const std::string& value);

/// Runs every point against the same dataset; the first row is the
/// normalization baseline. Artifacts of each point go to out_dir/NN_value
/// when out_dir is non-empty, plus sweep.csv and sweep.json. A failing
/// point stops the sweep and is recorded in `failure`.
SweepResult sweep(const RunConfig& base, SweepAxis axis, const std::vector<std::string>& values,
                  const std::filesystem::path& out_dir = {});

struct VerifyReport {
  bool pass = false;
  std::uint64_t compared = 0;
  std::optional<std::uint64_t> first_divergence;
  Word got = 0;
  Word want = 0;
  std::string message;
};

VerifyReport verify_result(std::span<const Word> got, std::span<const Word> want);
/// Recomputes the sequential oracle from the run's recorded configuration.
VerifyReport verify_artifacts(const std::filesystem::path& dir);

}  // namespace tascade
