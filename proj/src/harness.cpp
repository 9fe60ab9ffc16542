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

#include "tascade/harness.hpp"

#include <cctype>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "tascade/reference.hpp"
#include "tascade/simulator.hpp"

namespace tascade {

namespace {

using nlohmann::json;

constexpr char kResultMagic[4] = {'R', 'E', 'S', '1'};

std::string point_dir_name(std::size_t i, const std::string& value) {
  std::ostringstream os;
  os << std::setw(2) << std::setfill('0') << i << '_';
  for (char c : value) os << (std::isalnum(static_cast<unsigned char>(c)) ? c : '-');
  return os.str();
}

json ledger_summary(const MetricsLedger& ledger) {
  const auto& g = ledger.global;
  TileCounters sum;
  std::uint64_t iq_peak = 0;
  for (const auto& t : ledger.tiles) {
    sum.pu_active_cycles += t.pu_active_cycles;
    sum.router_active_cycles += t.router_active_cycles;
    sum.pcache_hits += t.pcache_hits;
    sum.pcache_misses += t.pcache_misses;
    sum.pcache_evictions += t.pcache_evictions;
    sum.updates_filtered += t.updates_filtered;
    sum.updates_coalesced += t.updates_coalesced;
    sum.sram_bytes += t.sram_bytes;
    for (std::uint32_t c = 0; c < kNumChannels; ++c) sum.tasks_by_channel[c] += t.tasks_by_channel[c];
    iq_peak = std::max(iq_peak, t.iq_peak);
  }
  return {
      {"cycles", g.total_cycles},
      {"flit_hops", g.flit_hops},
      {"boundary_flit_hops", g.boundary_flit_hops},
      {"messages_injected", g.messages_injected},
      {"messages_delivered", g.messages_delivered},
      {"messages_captured", g.messages_captured},
      {"captures_declined_full", g.captures_declined_full},
      {"tasks_executed", g.tasks_executed},
      {"tasks_by_channel", sum.tasks_by_channel},
      {"owner_updates_applied", g.owner_updates_applied},
      {"owner_updates_rejected", g.owner_updates_rejected},
      {"pcache_update_attempts", g.pcache_update_attempts},
      {"pcache_emissions", g.pcache_emissions},
      {"pcache_hits", sum.pcache_hits},
      {"pcache_misses", sum.pcache_misses},
      {"pcache_evictions", sum.pcache_evictions},
      {"updates_filtered", sum.updates_filtered},
      {"updates_coalesced", sum.updates_coalesced},
      {"pu_active_cycles", sum.pu_active_cycles},
      {"router_active_cycles", sum.router_active_cycles},
      {"sram_bytes", sum.sram_bytes},
      {"iq_peak", iq_peak},
      {"barriers", g.barriers},
  };
}

Workload make_workload(const RunConfig& cfg, const CsrGraph& graph) {
  return Workload(cfg.workload, graph, cfg.params);
}

}  // namespace

CsrGraph load_dataset(const DatasetSpec& spec) {
  switch (spec.kind) {
    case DatasetSpec::Kind::kRmat: return generate_rmat(spec.scale, spec.edge_factor, spec.seed);
    case DatasetSpec::Kind::kFile: return load_csr(spec.path);
    case DatasetSpec::Kind::kEdgeList: return read_edge_list(spec.path);
  }
  throw std::logic_error("unhandled dataset kind");
}

RunOutcome run_once(const RunConfig& cfg) { return run_once(cfg, load_dataset(cfg.dataset)); }

RunOutcome run_once(const RunConfig& cfg, const CsrGraph& graph) {
  RunOutcome out;
  out.config = cfg;
  std::optional<Workload> workload;
  std::optional<Simulator> sim;
  try {
    workload.emplace(make_workload(cfg, graph));
    out.sizing = resolve_sizing(cfg, workload->reduction_length());
    sim.emplace(make_sim_config(cfg, out.sizing), *workload);
  } catch (const std::invalid_argument& e) {
    throw ConfigError({e.what()});
  } catch (const std::out_of_range& e) {
    throw ConfigError({e.what()});
  }
  sim->run();

  out.ledger = sim->ledger();
  const auto r = workload->result();
  out.result.assign(r.begin(), r.end());

  const FrontierStats stats = workload->frontier_stats();
  const EnergyBreakdown energy = compute_energy(out.ledger, energy_profile(cfg.energy_profile));
  json s;
  s["config"] = cfg.to_json();
  s["sizing"] = {{"region_width", out.sizing.region_width},
                 {"region_width_auto", out.sizing.auto_width},
                 {"w_min", out.sizing.w_min},
                 {"local_fraction", out.sizing.local_fraction},
                 {"pcache_capacity", mode_traits(cfg.mode).proxies ? out.sizing.pcache_capacity : 0}};
  s["policy"] = std::string(to_string(sim->policy()));
  s["dataset"] = {{"vertices", workload->graph().num_vertices}, {"edges", workload->graph().num_edges()}};
  s["metrics"] = ledger_summary(out.ledger);
  s["edges_traversed"] = stats.edges_traversed;
  s["teps"] = out.ledger.global.total_cycles ? compute_teps(stats, out.ledger.global.total_cycles, cfg.frequency_hz)
                                             : 0.0;
  s["energy_j"] = {{"pu", energy.pu_j},
                   {"sram", energy.sram_j},
                   {"noc", energy.noc_j},
                   {"boundary", energy.boundary_j},
                   {"total", energy.total_j()}};
  s["result_length"] = out.result.size();
  out.summary = std::move(s);
  return out;
}

std::string metrics_csv(const MetricsLedger& ledger, std::uint32_t grid_width) {
  std::ostringstream os;
  os << "tile,x,y,pu_active_cycles,router_active_cycles,iq_peak,tasks_executed,t1,t2,t3,t3p,"
        "pcache_hits,pcache_misses,pcache_evictions,updates_filtered,updates_coalesced,sram_bytes\n";
  for (std::size_t i = 0; i < ledger.tiles.size(); ++i) {
    const auto& t = ledger.tiles[i];
    os << i << ',' << i % grid_width << ',' << i / grid_width << ',' << t.pu_active_cycles << ','
       << t.router_active_cycles << ',' << t.iq_peak << ',' << t.tasks_executed;
    for (auto c : t.tasks_by_channel) os << ',' << c;
    os << ',' << t.pcache_hits << ',' << t.pcache_misses << ',' << t.pcache_evictions << ',' << t.updates_filtered
       << ',' << t.updates_coalesced << ',' << t.sram_bytes << '\n';
  }
  return os.str();
}

std::vector<std::byte> encode_result(std::span<const Word> values) {
  std::vector<std::byte> out;
  out.reserve(12 + values.size() * 4);
  for (char c : kResultMagic) out.push_back(static_cast<std::byte>(c));
  const std::uint64_t n = values.size();
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::byte>((n >> (8 * i)) & 0xff));
  for (Word v : values) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xff));
  }
  return out;
}

std::vector<Word> decode_result(std::span<const std::byte> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kResultMagic, 4) != 0) {
    throw std::runtime_error("not a result array");
  }
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n |= std::uint64_t(std::to_integer<std::uint8_t>(bytes[4 + i])) << (8 * i);
  if ((bytes.size() - 12) / 4 != n || (bytes.size() - 12) % 4 != 0) throw std::runtime_error("truncated result array");
  std::vector<Word> out(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    Word v = 0;
    for (int i = 0; i < 4; ++i) v |= Word(std::to_integer<std::uint8_t>(bytes[12 + 4 * k + i])) << (8 * i);
    out[k] = v;
  }
  return out;
}

std::vector<std::byte> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> out(raw.size());
  std::memcpy(out.data(), raw.data(), raw.size());
  return out;
}

void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_artifacts(const RunOutcome& out, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "summary.json");
    f << out.summary.dump(2) << '\n';
  }
  {
    std::ofstream f(dir / "metrics.csv");
    f << metrics_csv(out.ledger, out.config.width);
  }
  write_file(dir / "result.bin", encode_result(out.result));
  if (out.ledger.timeline.enabled()) write_file(dir / "activity.bin", out.ledger.timeline.encode());
}

SweepAxis parse_sweep_axis(std::string_view name) {
  if (name == "mode") return SweepAxis::kMode;
  if (name == "region_width") return SweepAxis::kRegionWidth;
  if (name == "pcache_budget") return SweepAxis::kPcacheBudget;
  if (name == "grid_size") return SweepAxis::kGridSize;
  throw std::invalid_argument("unknown sweep axis '" + std::string(name) + "'");
}

std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::kMode: return "mode";
    case SweepAxis::kRegionWidth: return "region_width";
    case SweepAxis::kPcacheBudget: return "pcache_budget";
    case SweepAxis::kGridSize: return "grid_size";
  }
  return "?";
}

RunConfig apply_axis(const RunConfig& base, SweepAxis axis, const std::string& value) {
  json j = base.to_json();
  switch (axis) {
    case SweepAxis::kMode: j["mode"] = value; break;
    case SweepAxis::kRegionWidth:
      if (value == "auto") {
        j["region_width"] = "auto";
      } else {
        j["region_width"] = std::stoull(value);
      }
      break;
    case SweepAxis::kPcacheBudget:
      j["pcache"].erase("capacity");
      j["pcache"]["budget"] = value;
      break;
    case SweepAxis::kGridSize: {
      const auto n = std::stoull(value);
      j["grid"] = {{"width", n}, {"height", n}};
      break;
    }
  }
  return RunConfig::from_json(j, true);
}

std::string SweepResult::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(6);
  os << to_string(axis) << ",cycles,flit_hops,energy_j,speedup,traffic_ratio,energy_ratio,verified\n";
  for (const auto& r : rows) {
    os << r.value << ',' << r.cycles << ',' << r.flit_hops << ',' << r.energy_j << ',' << r.speedup << ','
       << r.traffic_ratio << ',' << r.energy_ratio << ',' << (r.verified ? "true" : "false") << '\n';
  }
  return os.str();
}

json SweepResult::to_json() const {
  json rows_json = json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"value", r.value},
                         {"cycles", r.cycles},
                         {"flit_hops", r.flit_hops},
                         {"energy_j", r.energy_j},
                         {"speedup", r.speedup},
                         {"traffic_ratio", r.traffic_ratio},
                         {"energy_ratio", r.energy_ratio},
                         {"verified", r.verified}});
  }
  json j = {{"axis", std::string(to_string(axis))}, {"rows", rows_json}};
  j["failure"] = failure ? json(*failure) : json(nullptr);
  return j;
}

SweepResult sweep(const RunConfig& base, SweepAxis axis, const std::vector<std::string>& values,
                  const std::filesystem::path& out_dir) {
  SweepResult res;
  res.axis = axis;
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  auto flush = [&] {
    if (out_dir.empty()) return;
    std::ofstream(out_dir / "sweep.csv") << res.to_csv();
    std::ofstream(out_dir / "sweep.json") << res.to_json().dump(2) << '\n';
  };
  // Every point shares the dataset bytes; only the swept axis differs.
  const CsrGraph graph = load_dataset(base.dataset);
  for (std::size_t i = 0; i < values.size(); ++i) {
    try {
      const RunConfig cfg = apply_axis(base, axis, values[i]);
      RunOutcome out = run_once(cfg, graph);
      const Workload w = make_workload(cfg, graph);
      SweepRow row;
      row.value = values[i];
      row.cycles = out.ledger.global.total_cycles;
      row.flit_hops = out.ledger.global.flit_hops;
      row.energy_j = out.summary["energy_j"]["total"].get<double>();
      row.verified = !reference::first_divergence(out.result, w.reference()).has_value();
      const SweepRow& b = res.rows.empty() ? row : res.rows.front();
      row.speedup = row.cycles ? static_cast<double>(b.cycles) / static_cast<double>(row.cycles) : 0.0;
      row.traffic_ratio = b.flit_hops ? static_cast<double>(row.flit_hops) / static_cast<double>(b.flit_hops) : 0.0;
      row.energy_ratio = b.energy_j > 0 ? row.energy_j / b.energy_j : 0.0;
      if (!out_dir.empty()) write_artifacts(out, out_dir / point_dir_name(i, values[i]));
      res.rows.push_back(row);
      flush();
    } catch (const std::exception& e) {
      res.failure = "point " + std::to_string(i) + " (" + values[i] + "): " + e.what();
      flush();
      return res;
    }
  }
  return res;
}

VerifyReport verify_result(std::span<const Word> got, std::span<const Word> want) {
  VerifyReport r;
  r.compared = std::min(got.size(), want.size());
  const auto div = reference::first_divergence(got, want);
  r.pass = !div.has_value();
  if (r.pass) {
    r.message = "PASS: " + std::to_string(want.size()) + " elements match the sequential oracle";
    return r;
  }
  r.first_divergence = *div;
  std::ostringstream os;
  os << "FAIL: first divergence at index " << *div;
  if (*div < got.size() && *div < want.size()) {
    r.got = got[*div];
    r.want = want[*div];
    os << " (got " << r.got << ", expected " << r.want << ")";
  } else {
    os << " (length " << got.size() << ", expected " << want.size() << ")";
  }
  r.message = os.str();
  return r;
}

VerifyReport verify_artifacts(const std::filesystem::path& dir) {
  std::ifstream f(dir / "summary.json");
  if (!f) throw std::runtime_error("missing " + (dir / "summary.json").string());
  const json summary = json::parse(f);
  const RunConfig cfg = RunConfig::from_json(summary.at("config"), true);
  const auto got = decode_result(read_file(dir / "result.bin"));
  const Workload w = make_workload(cfg, load_dataset(cfg.dataset));
  return verify_result(got, w.reference());
}

}  // namespace tascade
