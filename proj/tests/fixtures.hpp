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

#include <vector>

#include "tascade/apps.hpp"
#include "tascade/graph.hpp"
#include "tascade/simulator.hpp"

namespace fixture {

using namespace tascade;

// 0 -> 1 -> 2 with weights 2 and 3.
inline CsrGraph path() {
  const Edge e[] = {{0, 1, 2}, {1, 2, 3}};
  return csr_from_edges(3, e, true);
}

// Two disjoint directed triangles {0,1,2} and {3,4,5}.
inline CsrGraph triangles() {
  const Edge e[] = {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}};
  return csr_from_edges(6, e, false);
}

// Directed ring over n vertices.
inline CsrGraph ring(std::uint64_t n = 8) {
  std::vector<Edge> e;
  for (std::uint64_t i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return csr_from_edges(n, e, false);
}

// n x n identity matrix with explicit unit weights.
inline CsrGraph identity(std::uint64_t n = 8) {
  std::vector<Edge> e;
  for (std::uint64_t i = 0; i < n; ++i) e.push_back({i, i, 1});
  return csr_from_edges(n, e, true);
}

inline SimConfig sim_config(std::uint32_t grid, std::uint32_t w, Mode mode, std::uint64_t pcache) {
  SimConfig c;
  c.width = grid;
  c.height = grid;
  c.region_width = w;
  c.mode = mode;
  c.pcache_capacity = pcache;
  return c;
}

inline std::vector<Word> simulate(Workload& w, const SimConfig& cfg) {
  Simulator sim(cfg, w);
  sim.run();
  const auto r = w.result();
  return {r.begin(), r.end()};
}

}  // namespace fixture
