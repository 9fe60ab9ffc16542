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

// tascade: run, sweep, verify, gen-graph, export-heatmaps.
// Exit codes: 0 ok, 1 verification failure, 2 configuration error,
// 3 simulation or I/O failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tascade/harness.hpp"

namespace {

using nlohmann::json;
using namespace tascade;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Overrides {
  std::string config_path;
  std::optional<std::uint32_t> grid;
  std::optional<std::string> topology;
  std::optional<std::string> workload;
  std::optional<std::string> mode;
  std::optional<std::string> region_width;
  std::optional<std::string> pcache_budget;
  std::optional<std::uint64_t> pcache_capacity;
  std::optional<std::string> policy;
  std::optional<std::uint32_t> scale;
  std::optional<std::uint32_t> edge_factor;
  std::optional<std::string> graph_file;
  std::optional<std::uint64_t> search_key;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> activity_window;
  std::optional<std::string> energy_profile;
  bool large = false;
};

void add_config_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--grid", o.grid, "Square grid side (overrides grid.width/height)");
  cmd->add_option("--topology", o.topology, "mesh | torus | multichip_torus");
  cmd->add_option("--workload", o.workload, "bfs | sssp | wcc | pagerank | spmv | histogram");
  cmd->add_option("--mode", o.mode, "Execution mode");
  cmd->add_option("--region-width", o.region_width, "Proxy region width or 'auto'");
  cmd->add_option("--pcache-budget", o.pcache_budget, "P-cache size as a fraction of the local proxy array");
  cmd->add_option("--pcache-capacity", o.pcache_capacity, "P-cache size in elements");
  cmd->add_option("--policy", o.policy, "write_through | write_back | natural");
  cmd->add_option("--scale", o.scale, "RMAT scale");
  cmd->add_option("--edge-factor", o.edge_factor, "RMAT edge factor");
  cmd->add_option("--graph", o.graph_file, "CSR binary input instead of RMAT");
  cmd->add_option("--search-key", o.search_key, "BFS/SSSP root");
  cmd->add_option("--seed", o.seed, "Seed for weights and input vectors");
  cmd->add_option("--activity-window", o.activity_window, "Activity sampling window in cycles");
  cmd->add_option("--energy-profile", o.energy_profile, "paper-like-7nm | zero");
  cmd->add_flag("--large", o.large, "Allow grids above 128x128 and RMAT scale above 18");
}

RunConfig build_config(const Overrides& o) {
  json j = json::object();
  if (!o.config_path.empty()) {
    std::ifstream f(o.config_path);
    try {
      j = json::parse(f);
    } catch (const json::parse_error& e) {
      throw ConfigError({std::string("config file: ") + e.what()});
    }
  }
  if (!j.is_object()) throw ConfigError({"config file: top level must be an object"});
  if (o.grid) j["grid"] = {{"width", *o.grid}, {"height", *o.grid}};
  if (o.topology) j["topology"] = *o.topology;
  if (o.workload) j["workload"] = *o.workload;
  if (o.mode) j["mode"] = *o.mode;
  if (o.region_width) {
    if (*o.region_width == "auto") {
      j["region_width"] = "auto";
    } else {
      try {
        j["region_width"] = std::stoull(*o.region_width);
      } catch (const std::exception&) {
        throw ConfigError({"region_width: expected a positive integer or \"auto\""});
      }
    }
  }
  if (o.pcache_budget) j["pcache"]["budget"] = *o.pcache_budget;
  if (o.pcache_capacity) j["pcache"]["capacity"] = *o.pcache_capacity;
  if (o.policy) j["policy"] = *o.policy;
  if (o.scale) j["dataset"]["scale"] = *o.scale;
  if (o.edge_factor) j["dataset"]["edge_factor"] = *o.edge_factor;
  if (o.graph_file) j["dataset"] = {{"kind", "file"}, {"path", *o.graph_file}};
  if (o.search_key) j["workload_params"]["search_key"] = *o.search_key;
  if (o.seed) j["seed"] = *o.seed;
  if (o.activity_window) j["activity_window"] = *o.activity_window;
  if (o.energy_profile) j["energy_profile"] = *o.energy_profile;
  return RunConfig::from_json(j, o.large);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int cmd_run(const Overrides& o, const std::string& out_dir) {
  const RunConfig cfg = build_config(o);
  const RunOutcome out = run_once(cfg);
  write_artifacts(out, out_dir);
  const auto& m = out.summary["metrics"];
  std::cout << to_string(cfg.workload) << ' ' << to_string(cfg.mode) << ": cycles=" << m["cycles"]
            << " flit_hops=" << m["flit_hops"] << " W=" << out.sizing.region_width
            << (out.sizing.auto_width ? " (auto, W_min=" + std::to_string(out.sizing.w_min) + ")" : "")
            << " pcache=" << out.summary["sizing"]["pcache_capacity"] << " -> " << out_dir << '\n';
  return kExitOk;
}

int cmd_sweep(const Overrides& o, const std::string& axis, const std::string& values, const std::string& out_dir) {
  const RunConfig cfg = build_config(o);
  const SweepAxis a = parse_sweep_axis(axis);
  const SweepResult res = sweep(cfg, a, split(values), out_dir);
  std::cout << res.to_csv();
  if (res.failure) {
    std::cerr << "sweep aborted: " << *res.failure << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_verify(const std::string& run_dir) {
  const VerifyReport r = verify_artifacts(run_dir);
  std::cout << r.message << '\n';
  return r.pass ? kExitOk : kExitVerifyFail;
}

int cmd_gen_graph(std::uint32_t scale, std::uint32_t edge_factor, std::uint64_t seed, bool weighted,
                  const std::string& out) {
  CsrGraph g = generate_rmat(scale, edge_factor, seed);
  if (weighted) assign_random_weights(g, seed);
  write_csr(g, out);
  std::cout << "wrote " << out << ": V=" << g.num_vertices << " E=" << g.num_edges() << '\n';
  return kExitOk;
}

int cmd_export(const std::string& run_dir, Cycle window, const std::string& out) {
  const auto timeline = ActivityTimeline::decode(read_file(std::filesystem::path(run_dir) / "activity.bin"));
  const Cycle w = window ? window : timeline.window();
  const std::size_t n = export_heatmap_frames(timeline, w, out);
  std::cout << "wrote " << n << " frame pairs to " << out << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tascade tiled-manycore simulator"};
  app.require_subcommand(1);

  Overrides run_o;
  std::string run_out = "out";
  auto* run = app.add_subcommand("run", "Run one simulation and write artifacts");
  add_config_flags(run, run_o);
  run->add_option("-o,--out", run_out, "Artifact directory");

  Overrides sweep_o;
  std::string sweep_out = "sweep";
  std::string axis;
  std::string values;
  auto* sw = app.add_subcommand("sweep", "Run a one-axis sweep and print a normalized table");
  add_config_flags(sw, sweep_o);
  sw->add_option("--axis", axis, "mode | region_width | pcache_budget | grid_size")->required();
  sw->add_option("--values", values, "Comma-separated axis values; the first is the baseline")->required();
  sw->add_option("-o,--out", sweep_out, "Artifact directory");

  std::string verify_dir;
  auto* ver = app.add_subcommand("verify", "Compare a run's result array with the sequential oracle");
  ver->add_option("run_dir", verify_dir, "Artifact directory of a run")->required();

  std::uint32_t scale = 10;
  std::uint32_t edge_factor = 16;
  std::uint64_t seed = 1;
  bool weighted = false;
  bool gen_large = false;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-graph", "Write an RMAT graph as a binary CSR file");
  gen->add_option("--scale", scale, "log2 of the vertex count");
  gen->add_option("--edge-factor", edge_factor, "Edges per vertex");
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_flag("--weighted", weighted, "Attach random weights in [1, 255]");
  gen->add_flag("--large", gen_large, "Allow scale above 18");
  gen->add_option("-o,--out", gen_out, "Output file")->required();

  std::string heat_dir;
  std::string heat_out = "heatmaps";
  Cycle heat_window = 0;
  auto* heat = app.add_subcommand("export-heatmaps", "Write PU/router heatmap frames from a sampled run");
  heat->add_option("run_dir", heat_dir, "Artifact directory of a run with activity sampling")->required();
  heat->add_option("--window", heat_window, "Frame length in cycles (multiple of the sampling window)");
  heat->add_option("-o,--out", heat_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_o, run_out);
    if (*sw) return cmd_sweep(sweep_o, axis, values, sweep_out);
    if (*ver) return cmd_verify(verify_dir);
    if (*gen) {
      if (scale == 0 || edge_factor == 0 || (scale > 18 && !gen_large)) {
        throw ConfigError({"gen-graph: scale must be in [1, 18] (or pass --large) and edge factor positive"});
      }
      return cmd_gen_graph(scale, edge_factor, seed, weighted, gen_out);
    }
    if (*heat) return cmd_export(heat_dir, heat_window, heat_out);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
