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

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "tascade/metrics.hpp"

using namespace tascade;

TEST_SUITE("metrics_energy") {

TEST_CASE("TEPS arithmetic") {
  CHECK(compute_teps({1000000}, 1000000, 1e9) == doctest::Approx(1e9));
  CHECK_THROWS_AS(compute_teps({10}, 0, 1e9), std::invalid_argument);
}

TEST_CASE("zero coefficients give zero energy") {
  MetricsLedger l;
  l.tiles.resize(4);
  l.tiles[0].pu_active_cycles = 100;
  l.global.flit_hops = 1000;
  CHECK(compute_energy(l, energy_profile("zero")).total_j() == 0.0);
}

TEST_CASE("boundary energy") {
  MetricsLedger l;
  l.global.boundary_flit_hops = 1000000;
  EnergyModel m;
  m.boundary_pj_per_bit = 1.17;
  // 1e6 hops * 64 bits * 1.17 pJ = 74.88 uJ.
  CHECK(compute_energy(l, m).boundary_j == doctest::Approx(74.88e-6));
  CHECK(EnergyModel::paper_like_7nm().boundary_pj_per_bit == 1.17);
}

TEST_CASE("NoC energy is linear in flit hops") {
  MetricsLedger l;
  l.tiles.resize(1);
  l.tiles[0].pu_active_cycles = 50;
  l.tiles[0].sram_bytes = 80;
  l.global.flit_hops = 1000;
  const auto m = EnergyModel::paper_like_7nm();
  const auto a = compute_energy(l, m);
  l.global.flit_hops = 2000;
  const auto b = compute_energy(l, m);
  CHECK(b.noc_j == doctest::Approx(2 * a.noc_j));
  CHECK(b.pu_j == a.pu_j);
  CHECK(b.sram_j == a.sram_j);
  CHECK(b.boundary_j == a.boundary_j);
}

TEST_CASE("unknown energy profile") { CHECK_THROWS_AS(energy_profile("90nm"), std::invalid_argument); }

TEST_CASE("heatmap frames") {
  ActivityTimeline t(2, 2, 10);
  for (Cycle c = 0; c < 25; ++c) t.record(1, c, true, c % 2 == 0);
  t.finish(25);
  const auto frames = heatmap_frames(t, 20);
  REQUIRE(frames.size() == 2);  // ceil(25 / 20)
  CHECK(frames[0].pu[1] == doctest::Approx(1.0));
  CHECK(frames[0].router[1] == doctest::Approx(0.5));
  CHECK(frames[0].pu[0] == 0.0);
  CHECK(frames[1].end - frames[1].begin == 5);
  CHECK(frames[1].pu[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(heatmap_frames(t, 15), std::invalid_argument);
}

TEST_CASE("idle grid gives all-zero frames") {
  ActivityTimeline t(4, 4, 40000);
  t.finish(120000);
  const auto frames = heatmap_frames(t, 40000);
  CHECK(frames.size() == 3);
  for (const auto& f : frames) {
    for (double v : f.pu) CHECK(v == 0.0);
    for (double v : f.router) CHECK(v == 0.0);
  }
}

TEST_CASE("timeline encoding round trips") {
  ActivityTimeline t(2, 1, 4);
  t.record(0, 1, true, false);
  t.record(1, 9, true, true);
  t.finish(12);
  const auto bytes = t.encode();
  const auto u = ActivityTimeline::decode(bytes);
  CHECK(u.encode() == bytes);
  CHECK(u.num_windows() == 3);
  CHECK(u.pu_window(2)[1] == 1);
  auto bad = bytes;
  bad.pop_back();
  CHECK_THROWS(ActivityTimeline::decode(bad));
}

TEST_CASE("heatmap export writes pgm and csv pairs") {
  ActivityTimeline t(2, 2, 5);
  t.record(3, 2, true, true);
  t.finish(10);
  const auto dir = std::filesystem::temp_directory_path() / "tascade_heatmaps";
  std::filesystem::remove_all(dir);
  CHECK(export_heatmap_frames(t, 5, dir) == 2);
  CHECK(std::filesystem::exists(dir / "pu_0000.pgm"));
  CHECK(std::filesystem::exists(dir / "router_0001.csv"));
  std::ifstream f(dir / "pu_0000.pgm");
  std::string magic;
  f >> magic;
  CHECK(magic == "P2");
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
