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

#include "tascade/reference.hpp"

#include <deque>
#include <functional>
#include <numeric>
#include <queue>
#include <utility>

namespace tascade::reference {

std::vector<Word> sssp(const CsrGraph& g, std::uint64_t source) {
  std::vector<std::uint64_t> dist(g.num_vertices, std::numeric_limits<std::uint64_t>::max());
  if (source >= g.num_vertices) return std::vector<Word>(g.num_vertices, kInfinity);
  using Item = std::pair<std::uint64_t, std::uint64_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0;
  heap.push({0, source});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d != dist[u]) continue;
    for (auto e = g.row_offsets[u]; e < g.row_offsets[u + 1]; ++e) {
      const std::uint64_t nd = d + (g.weighted() ? g.weights[e] : 1);
      const auto v = g.col_indices[e];
      if (nd < dist[v]) {
        dist[v] = nd;
        heap.push({nd, v});
      }
    }
  }
  std::vector<Word> out(g.num_vertices);
  for (std::size_t v = 0; v < out.size(); ++v) {
    out[v] = dist[v] >= kInfinity ? kInfinity : static_cast<Word>(dist[v]);
  }
  return out;
}

std::vector<Word> bfs(const CsrGraph& g, std::uint64_t source) {
  std::vector<Word> level(g.num_vertices, kInfinity);
  if (source >= g.num_vertices) return level;
  std::deque<std::uint64_t> queue{source};
  level[source] = 0;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (auto e = g.row_offsets[u]; e < g.row_offsets[u + 1]; ++e) {
      const auto v = g.col_indices[e];
      if (level[v] == kInfinity) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return level;
}

std::vector<Word> wcc(const CsrGraph& g) {
  std::vector<std::uint64_t> parent(g.num_vertices);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::uint64_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (std::uint64_t u = 0; u < g.num_vertices; ++u) {
    for (auto e = g.row_offsets[u]; e < g.row_offsets[u + 1]; ++e) {
      auto a = find(u);
      auto b = find(g.col_indices[e]);
      if (a == b) continue;
      // Keep the smaller id as root so the root is the component label.
      if (a < b) std::swap(a, b);
      parent[a] = b;
    }
  }
  std::vector<Word> label(g.num_vertices);
  for (std::uint64_t v = 0; v < g.num_vertices; ++v) label[v] = static_cast<Word>(find(v));
  return label;
}

std::vector<Word> pagerank(const CsrGraph& g, std::uint32_t epochs, std::uint32_t damping_pct) {
  const Word base = static_cast<Word>((std::uint64_t{100 - damping_pct} << 16) / 100);
  std::vector<Word> rank(g.num_vertices, 1u << 16);
  for (std::uint32_t it = 0; it < epochs; ++it) {
    std::vector<Word> next(g.num_vertices, base);
    for (std::uint64_t u = 0; u < g.num_vertices; ++u) {
      const auto deg = g.row_offsets[u + 1] - g.row_offsets[u];
      if (deg == 0) continue;
      const Word share = static_cast<Word>((std::uint64_t{rank[u]} * damping_pct / 100) / deg);
      for (auto e = g.row_offsets[u]; e < g.row_offsets[u + 1]; ++e) next[g.col_indices[e]] += share;
    }
    rank = std::move(next);
  }
  return rank;
}

std::vector<Word> spmv(const CsrGraph& g, std::span<const Word> x) {
  std::vector<Word> y(g.num_vertices, 0);
  for (std::uint64_t r = 0; r < g.num_vertices; ++r) {
    for (auto e = g.row_offsets[r]; e < g.row_offsets[r + 1]; ++e) {
      const Word a = g.weighted() ? g.weights[e] : 1u;
      y[g.col_indices[e]] += a * x[r];
    }
  }
  return y;
}

std::vector<Word> histogram(std::span<const std::uint64_t> input, std::uint64_t bins) {
  std::vector<Word> counts(bins, 0);
  for (auto v : input) ++counts[v];
  return counts;
}

std::optional<std::size_t> first_divergence(std::span<const Word> got, std::span<const Word> want) {
  const std::size_t n = std::min(got.size(), want.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (got[i] != want[i]) return i;
  }
  if (got.size() != want.size()) return n;
  return std::nullopt;
}

}  // namespace tascade::reference
