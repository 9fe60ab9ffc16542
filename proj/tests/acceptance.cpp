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

// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance            run all ten
//   acceptance 3 5        run a subset

#include <gmpxx.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tascade/geometry.hpp"
#include "tascade/harness.hpp"
#include "tascade/noc.hpp"
#include "tascade/reference.hpp"

using namespace tascade;

namespace {

// Pinned thresholds.
constexpr double kCriterion1BudgetSeconds = 300.0;
constexpr double kTrafficRatioMax = 0.8;
constexpr double kOrderingSlack = 0.05;
constexpr double kSpeedupFloor = 1.0;

// Directional configuration: 32x32 torus, RMAT-14, 4-wide regions (an 8x8
// array of regions), P-cache holding the whole local proxy fraction.
constexpr std::uint32_t kDirGrid = 32;
constexpr std::uint32_t kDirScale = 14;
constexpr std::uint32_t kDirRegion = 4;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;
};

void report(int n, const char* title, const Verdict& v) {
  std::printf("criterion %2d %-4s %s: %s\n", n, v.pass ? "PASS" : "FAIL", title, v.detail.c_str());
  std::fflush(stdout);
}

constexpr std::array<WorkloadKind, 6> kWorkloads = {WorkloadKind::kBfs,      WorkloadKind::kSssp,
                                                    WorkloadKind::kWcc,      WorkloadKind::kPageRank,
                                                    WorkloadKind::kSpmv,     WorkloadKind::kHistogram};

struct Combo {
  std::uint32_t grid;
  std::uint32_t region;
  double budget;  // fraction of the padded local proxy fraction
};

std::uint64_t budget_capacity(const Workload& w, const Combo& c) {
  const GridGeometry g(c.grid, c.grid, c.region);
  const Partition p = partition(w.reduction_length(), g.num_tiles());
  const std::uint64_t frac = w.reduction_length() ? ProxyAddressMap(p, g, {0, 0}).fraction_length() : 1;
  std::uint64_t cap = next_pow2(std::max<std::uint64_t>(frac, 1));
  const auto target = static_cast<std::uint64_t>(static_cast<double>(cap) * c.budget);
  while (cap > 1 && cap > target) cap >>= 1;
  return cap;
}

// ---------------------------------------------------------------- 1
Verdict criterion1() {
  const auto t0 = Clock::now();
  Verdict v;
  std::uint64_t runs = 0;
  std::uint64_t mismatches = 0;
  std::set<std::string> combos_seen;
  std::ostringstream first_bad;

  auto check = [&](const std::string& label, WorkloadKind kind, const CsrGraph& g, const std::vector<Combo>& combos) {
    WorkloadParams params;
    params.pagerank_epochs = 4;
    const Workload proto(kind, g, params);
    const auto want = oracle::expected(proto);
    for (const auto& c : combos) {
      for (Mode mode : kAllModes) {
        Workload w(kind, g, params);
        const auto cfg = fixture::sim_config(c.grid, c.region, mode, budget_capacity(w, c));
        std::vector<Word> got;
        try {
          got = fixture::simulate(w, cfg);
        } catch (const std::exception& e) {
          got.clear();
          if (!mismatches) first_bad << label << '/' << to_string(kind) << '/' << to_string(mode) << ": " << e.what();
          ++mismatches;
          ++runs;
          continue;
        }
        ++runs;
        combos_seen.insert(std::to_string(c.region) + "@" + std::to_string(c.budget));
        if (got != want) {
          if (!mismatches) {
            const auto d = reference::first_divergence(got, want);
            first_bad << label << '/' << to_string(kind) << '/' << to_string(mode) << " W=" << c.region
                      << " diverges at " << (d ? *d : 0);
          }
          ++mismatches;
        }
      }
    }
  };

  const std::vector<Combo> tiny = {{4, 1, 1.0}, {4, 2, 0.25}, {4, 4, 1.0 / 16}};
  const std::vector<Combo> small = {{8, 2, 1.0}, {8, 4, 0.25}, {8, 8, 1.0 / 16}};
  const std::vector<Combo> mid = {{16, 4, 1.0}};
  const std::vector<Combo> large = {{16, 2, 1.0}};

  const std::vector<std::uint64_t> hist_input = {1, 1, 2};
  for (WorkloadKind k : kWorkloads) {
    if (k == WorkloadKind::kHistogram) {
      // Histogram fixture: input [1, 1, 2] over 4 bins.
      const std::vector<std::uint64_t> input = hist_input;
      const std::vector<Word> want = oracle::histogram(input, 4);
      for (const auto& c : tiny) {
        for (Mode mode : kAllModes) {
          Workload w = Workload::histogram(input, 4);
          const auto got = fixture::simulate(w, fixture::sim_config(c.grid, c.region, mode, budget_capacity(w, c)));
          ++runs;
          if (got != want) {
            if (!mismatches) first_bad << "histogram-fixture/" << to_string(mode);
            ++mismatches;
          }
        }
      }
    }
    check("path", k, fixture::path(), tiny);
    check("triangles", k, fixture::triangles(), tiny);
    check("ring", k, fixture::ring(), tiny);
    check("identity", k, fixture::identity(), tiny);
    check("rmat10", k, generate_rmat(10, 16, 1), small);
    check("rmat12", k, generate_rmat(12, 16, 2), mid);
    check("rmat14", k, generate_rmat(14, 16, 3), large);
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << runs << " runs, " << mismatches << " mismatches, " << combos_seen.size() << " (W, budget) combos, "
     << static_cast<int>(secs) << " s (limit " << kCriterion1BudgetSeconds << " s)";
  if (mismatches) os << "; first: " << first_bad.str();
  v.pass = mismatches == 0 && combos_seen.size() >= 3 && secs < kCriterion1BudgetSeconds;
  v.detail = os.str();
  return v;
}

// ---------------------------------------------------------------- 2
// Direct transliteration of the router predicate:
//   select_msg   = PU_IQ_lt_half_full_r || opposite_port_buffer_full_r
//   go_to_proxy  = is_proxy_x && is_proxy_y && select_msg
//   route_to_core = go_to_proxy || is_dest
// Both registered signals fold in proxy_enabled_r.
CaptureDecision gate_model(bool is_dest, bool px, bool py, bool iq_lt_half, bool opp_full, bool enabled) {
  const bool iq_r = iq_lt_half && enabled;
  const bool opp_r = opp_full && enabled;
  const bool select_msg = iq_r || opp_r;
  const bool go_to_proxy = px && py && select_msg;
  const bool route_to_core = go_to_proxy || is_dest;
  if (!route_to_core) return CaptureDecision::kForward;
  return is_dest ? CaptureDecision::kDeliverLocal : CaptureDecision::kCaptureAsProxy;
}

// {id[5:2] & mask, id[1:0]} generalized to the grid's coordinate width.
std::uint32_t within(std::uint32_t id, std::uint32_t mask) { return (((id >> 2) & mask) << 2) | (id & 3u); }

Verdict criterion2() {
  std::uint64_t rows = 0;
  std::uint64_t bad = 0;
  for (unsigned bits = 0; bits < 64; ++bits) {
    const bool b[6] = {bool(bits & 1), bool(bits & 2), bool(bits & 4), bool(bits & 8), bool(bits & 16),
                       bool(bits & 32)};
    const CaptureSignals s{b[0], b[1], b[2], b[3], b[4]};
    const auto got = capture_decision(s, b[5] ? CascadeMode::kSelective : CascadeMode::kNone);
    bad += got != gate_model(b[0], b[1], b[2], b[3], b[4], b[5]);
    ++rows;
  }
  // 8x8 grid, W=4: the mask over bits above the 2-bit intra-region field is 0.
  const GridGeometry g(8, 8, 4);
  const std::uint32_t mask = (g.region_width() >> 2) == 0 ? 0 : (g.region_width() >> 2) - 1;
  std::uint64_t pairs = 0;
  for (TileId here = 0; here < g.num_tiles(); ++here) {
    for (TileId dest = 0; dest < g.num_tiles(); ++dest) {
      const Coord h = g.coord(here);
      const Coord d = g.coord(dest);
      const bool is_dest = h == d;
      const bool px = within(d.x, mask) == within(h.x, mask);
      const bool py = within(d.y, mask) == within(h.y, mask);
      for (unsigned sig = 0; sig < 8; ++sig) {
        const bool iq = sig & 1, opp = sig & 2, en = sig & 4;
        const CaptureSignals s = capture_signals(h, d, g, iq, opp);
        bad += s.is_dest != is_dest || s.is_proxy_x != px || s.is_proxy_y != py;
        bad += capture_decision(s, en ? CascadeMode::kSelective : CascadeMode::kNone) !=
               gate_model(is_dest, px, py, iq, opp, en);
      }
      ++pairs;
    }
  }
  Verdict v;
  v.pass = bad == 0;
  v.detail = std::to_string(rows) + " truth-table rows, " + std::to_string(pairs) + " (tile, dest) pairs x 8 signal " +
             "settings, " + std::to_string(bad) + " mismatches";
  return v;
}

// ---------------------------------------------------------------- 3
std::uint64_t to_u64(const mpz_class& z) {
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, z.get_mpz_t());
  return out;
}

// Smallest power of two W with W^2 >= P / (Pmax * C), via exact integers.
std::uint64_t gmp_w_min(const mpz_class& p, const mpz_class& pmax, const mpz_class& c) {
  mpz_class q;
  mpz_class denom = pmax * c;
  mpz_cdiv_q(q.get_mpz_t(), p.get_mpz_t(), denom.get_mpz_t());
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), q.get_mpz_t());
  if (r * r < q) r += 1;
  mpz_class w = 1;
  while (w < r) w *= 2;
  return to_u64(w);
}

std::uint64_t gmp_p_cache(const mpz_class& p, const mpz_class& pmax, std::uint64_t wmin) {
  const mpz_class d = std::max<std::uint64_t>(16, wmin);
  mpz_class q;
  mpz_class d2 = d * d;
  mpz_fdiv_q(q.get_mpz_t(), p.get_mpz_t(), d2.get_mpz_t());
  return to_u64(q < pmax ? q : pmax);
}

Verdict criterion3() {
  std::uint64_t bad = 0;
  std::ostringstream os;
  const SizingInputs worked{1ull << 22, 1ull << 14, 16};
  const auto wm = w_min(worked);
  const auto pc = p_cache_size(worked, wm);
  bad += wm != 4;
  bad += pc != (1ull << 14);
  os << "worked: W_min=" << wm << " P_cache=" << pc;
  std::mt19937_64 rng(2026);
  for (int i = 0; i < 10; ++i) {
    const std::uint64_t p = (rng() >> 20) + 1;              // up to 2^44
    const std::uint64_t pmax = 1ull << (6 + rng() % 12);    // 2^6 .. 2^17
    const std::uint64_t c = 1 + rng() % 32;
    const mpz_class P(std::to_string(p)), PM(std::to_string(pmax)), C(std::to_string(c));
    const std::uint64_t want_w = gmp_w_min(P, PM, C);
    const SizingInputs in{p, pmax, c};
    const std::uint64_t got_w = w_min(in);
    const std::uint64_t want_pc = gmp_p_cache(P, PM, want_w);
    const std::uint64_t got_pc = p_cache_size(in, static_cast<std::uint32_t>(got_w));
    bad += got_w != want_w || got_pc != want_pc;
  }
  os << "; 10 random inputs vs GMP; " << bad << " mismatches";
  Verdict v;
  v.pass = bad == 0;
  v.detail = os.str();
  return v;
}

// ---------------------------------------------------------------- 4
struct HopSink : DeliverySink {
  std::vector<Message> got;
  bool can_accept(TileId, std::uint8_t) const override { return true; }
  void accept(TileId, std::uint8_t, const Message& m, bool) override { got.push_back(m); }
  bool iq_below_half(TileId, std::uint8_t) const override { return true; }
};

Verdict criterion4() {
  std::uint64_t bad = 0;
  std::uint64_t pairs = 0;
  for (auto topo : {Topology::kMesh, Topology::kTorus}) {
    const GridGeometry g(16, 16, 4);
    NetworkConfig nc;
    nc.topology = topo;
    Network net(g, nc);
    HopSink sink;
    std::mt19937_64 rng(topo == Topology::kMesh ? 11 : 12);
    for (int i = 0; i < 1000; ++i) {
      const Coord s{std::uint32_t(rng() % 16), std::uint32_t(rng() % 16)};
      const Coord d{std::uint32_t(rng() % 16), std::uint32_t(rng() % 16)};
      Message m;
      m.src = g.id(s);
      m.dest = g.id(d);
      m.channel = kEdge;
      net.inject(m.src, m);
      while (sink.got.size() <= static_cast<std::size_t>(i)) net.advance_cycle(sink);
      const int dx = std::abs(int(s.x) - int(d.x));
      const int dy = std::abs(int(s.y) - int(d.y));
      const int want = topo == Topology::kMesh ? dx + dy : std::min(dx, 16 - dx) + std::min(dy, 16 - dy);
      bad += sink.got.back().hops != std::uint32_t(want);
      ++pairs;
    }
  }
  Verdict v;
  v.pass = bad == 0;
  v.detail = std::to_string(pairs) + " pairs on 16x16 mesh and torus, " + std::to_string(bad) + " mismatches";
  return v;
}

// ---------------------------------------------------------------- 5
Verdict criterion5() {
  const CsrGraph g = generate_rmat(12, 16, 5);
  std::ostringstream os;
  bool pass = true;
  for (Mode mode : {Mode::kTascadeSelective, Mode::kProxyAlwaysCascade}) {
    Workload w(WorkloadKind::kBfs, g, {});
    Simulator sim(fixture::sim_config(16, 4, mode, 4), w);
    std::uint64_t cycles_checked = 0;
    std::uint64_t violations = 0;
    sim.set_observer([&](const Simulator& s) {
      ++cycles_checked;
      // Messages: counted by walking every router buffer.
      std::uint64_t buffered = 0;
      s.network().for_each_message([&](const Message&) { ++buffered; });
      const auto& c = s.network().counters();
      if (c.injected != c.delivered + c.captured + buffered) ++violations;
      // Update tokens: each issued update is in transit, filtered by a proxy
      // P-cache, or terminal at the owner (applied or filtered there).
      if (s.updates_issued() != s.updates_in_transit() + s.pcache_filtered() + s.owner_updates()) ++violations;
    });
    sim.run();
    bool clean = true;
    for (const auto& t : sim.tiles()) clean = clean && (!t.pcache || t.pcache->clean());
    const bool ok = violations == 0 && sim.network().in_flight() == 0 && clean && sim.quiescent() &&
                    std::vector<Word>(w.result().begin(), w.result().end()) == oracle::expected(w);
    pass = pass && ok;
    os << to_string(mode) << ": " << cycles_checked << " cycles, " << violations << " violations, in-flight "
       << sim.network().in_flight() << ", caches " << (clean ? "clean" : "dirty") << "; ";
  }
  Verdict v;
  v.pass = pass;
  v.detail = os.str();
  return v;
}

// ---------------------------------------------------------------- 6-8
struct DirRun {
  std::uint64_t cycles = 0;
  std::uint64_t flit_hops = 0;
  bool correct = false;
};

struct DirResults {
  std::map<std::pair<WorkloadKind, std::string>, DirRun> runs;
  double seconds = 0;
};

DirResults& directional() {
  static DirResults r;
  static bool done = false;
  if (done) return r;
  done = true;
  const auto t0 = Clock::now();
  const CsrGraph g = generate_rmat(kDirScale, 16, 1);
  for (WorkloadKind k : {WorkloadKind::kHistogram, WorkloadKind::kSssp}) {
    const Workload proto(k, g, {});
    const auto want = oracle::expected(proto);
    const Combo full{kDirGrid, kDirRegion, 1.0};
    const Combo sixteenth{kDirGrid, kDirRegion, 1.0 / 16};
    const std::pair<const char*, std::pair<Mode, Combo>> plan[] = {
        {"no_proxy", {Mode::kNoProxy, full}},
        {"proxy_merge_owner", {Mode::kProxyMergeOwner, full}},
        {"tascade_selective", {Mode::kTascadeSelective, full}},
        {"sync_merge", {Mode::kSyncMerge, full}},
        {"tascade_selective@1/16", {Mode::kTascadeSelective, sixteenth}},
    };
    for (const auto& [label, mc] : plan) {
      Workload w(k, g, {});
      auto cfg = fixture::sim_config(kDirGrid, mc.second.region, mc.first, budget_capacity(w, mc.second));
      cfg.network.topology = Topology::kTorus;
      Simulator sim(cfg, w);
      sim.run();
      const auto l = sim.ledger();
      r.runs[{k, label}] = {l.global.total_cycles, l.global.flit_hops,
                            std::vector<Word>(w.result().begin(), w.result().end()) == want};
    }
  }
  r.seconds = seconds_since(t0);
  return r;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", x);
  return buf;
}

const DirRun& dir(WorkloadKind k, const char* label) { return directional().runs.at({k, label}); }

bool all_correct() {
  for (const auto& [key, run] : directional().runs) {
    if (!run.correct) return false;
  }
  return true;
}

Verdict criterion6() {
  Verdict v;
  std::ostringstream os;
  for (WorkloadKind k : {WorkloadKind::kHistogram, WorkloadKind::kSssp}) {
    const double ratio = double(dir(k, "tascade_selective").flit_hops) / double(dir(k, "no_proxy").flit_hops);
    v.pass = v.pass && ratio <= kTrafficRatioMax;
    os << to_string(k) << " flit_hops selective/no_proxy = " << fmt(ratio) << " (" << dir(k, "tascade_selective").flit_hops
       << "/" << dir(k, "no_proxy").flit_hops << "); ";
  }
  v.pass = v.pass && all_correct();
  os << "limit " << kTrafficRatioMax << ", results " << (all_correct() ? "match oracle" : "DIVERGE") << ", "
     << static_cast<int>(directional().seconds) << " s";
  v.detail = os.str();
  return v;
}

Verdict criterion7() {
  Verdict v;
  std::ostringstream os;
  auto geq = [&](WorkloadKind k, const char* a, const char* b) {
    const double ra = double(dir(k, a).cycles);
    const double rb = double(dir(k, b).cycles);
    const bool ok = ra >= (1.0 - kOrderingSlack) * rb;
    v.pass = v.pass && ok;
    os << a << "/" << b << "=" << fmt(ra / rb) << (ok ? "" : "(!)") << " ";
  };
  for (WorkloadKind k : {WorkloadKind::kHistogram, WorkloadKind::kSssp}) {
    os << to_string(k) << ": ";
    geq(k, "no_proxy", "proxy_merge_owner");
    geq(k, "proxy_merge_owner", "tascade_selective");
    geq(k, "sync_merge", "tascade_selective");
    os << "; ";
  }
  os << "slack " << kOrderingSlack;
  v.detail = os.str();
  return v;
}

Verdict criterion8() {
  Verdict v;
  std::ostringstream os;
  for (WorkloadKind k : {WorkloadKind::kHistogram, WorkloadKind::kSssp}) {
    const double speedup = double(dir(k, "no_proxy").cycles) / double(dir(k, "tascade_selective@1/16").cycles);
    v.pass = v.pass && speedup > kSpeedupFloor;
    os << to_string(k) << " speedup at 1/16 budget = " << fmt(speedup) << "; ";
  }
  os << "floor " << kSpeedupFloor;
  v.detail = os.str();
  return v;
}

// ---------------------------------------------------------------- 9
Verdict criterion9() {
  const std::uint64_t p_array = 1ull << 14;
  std::vector<std::uint64_t> input(p_array);
  for (std::uint64_t i = 0; i < p_array; ++i) input[i] = i;
  std::uint64_t bad = 0;
  std::ostringstream os;
  for (std::uint32_t w : {4u, 8u, 16u}) {
    Workload wl = Workload::histogram(input, p_array);
    Simulator sim(fixture::sim_config(kDirGrid, w, Mode::kTascadeSelective, 1), wl);
    // Measured: how many global indices each tile proxies for.
    std::vector<std::uint64_t> measured(sim.geometry().num_tiles(), 0);
    const GridGeometry& g = sim.geometry();
    for (std::uint64_t i = 0; i < p_array; ++i) {
      const Coord owner = owner_tile(i, sim.vertex_partition(), g);
      for (std::uint32_t ry = 0; ry < g.regions_y(); ++ry) {
        for (std::uint32_t rx = 0; rx < g.regions_x(); ++rx) {
          ++measured[g.id(proxy_tile(owner, {rx * w, ry * w}, g))];
        }
      }
    }
    const std::uint64_t want = p_array / (std::uint64_t{w} * w);
    for (const auto& t : sim.tiles()) {
      bad += measured[t.id] != want;
      bad += !t.pcache || t.pcache->config().local_fraction_len != want;
    }
    os << "W=" << w << ": " << want << " elements/tile; ";
  }
  Verdict v;
  v.pass = bad == 0;
  os << bad << " mismatches over 32x32 tiles";
  v.detail = os.str();
  return v;
}

// ---------------------------------------------------------------- 10
Verdict criterion10() {
  std::uint64_t bad = 0;
  std::uint64_t configs = 0;
  const auto root = std::filesystem::temp_directory_path() / "tascade_acceptance_determinism";
  for (const char* wl : {"sssp", "pagerank", "histogram"}) {
    for (const char* mode : {"tascade_selective", "sync_cascade"}) {
      const nlohmann::json j = {{"grid", {{"width", 8}, {"height", 8}}},
                                {"workload", wl},
                                {"mode", mode},
                                {"region_width", 4},
                                {"activity_window", 100},
                                {"dataset", {{"kind", "rmat"}, {"scale", 10}, {"edge_factor", 16}, {"seed", 4}}}};
      const RunConfig cfg = RunConfig::from_json(j);
      const auto a = root / (std::string(wl) + "_" + mode + "_a");
      const auto b = root / (std::string(wl) + "_" + mode + "_b");
      write_artifacts(run_once(cfg), a);
      write_artifacts(run_once(cfg), b);
      for (const char* f : {"summary.json", "result.bin", "metrics.csv", "activity.bin"}) {
        bad += read_file(a / f) != read_file(b / f);
      }
      ++configs;
    }
  }
  std::filesystem::remove_all(root);
  Verdict v;
  v.pass = bad == 0;
  v.detail = std::to_string(configs) + " configs run twice, " + std::to_string(bad) + " differing artifacts";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const auto want = [&](int n) { return only.empty() || only.count(n); };

  struct Item {
    int n;
    const char* title;
    Verdict (*fn)();
  };
  const Item items[] = {
      {1, "oracle equivalence", criterion1},   {2, "capture predicate", criterion2},
      {3, "region sizing", criterion3},        {4, "hop-count law", criterion4},
      {5, "conservation", criterion5},         {6, "traffic reduction", criterion6},
      {7, "mode ordering", criterion7},        {8, "P-cache pressure", criterion8},
      {9, "proxy footprint", criterion9},      {10, "determinism", criterion10},
  };
  int failures = 0;
  for (const auto& it : items) {
    if (!want(it.n)) continue;
    Verdict v;
    try {
      v = it.fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    report(it.n, it.title, v);
    failures += !v.pass;
  }
  return failures == 0 ? 0 : 1;
}
