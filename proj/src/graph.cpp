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

#include "tascade/graph.hpp"

#include "tascade/common.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

namespace tascade {

namespace {

constexpr char kMagic[4] = {'C', 'S', 'R', '1'};
constexpr std::size_t kHeaderBytes = 4 + 3 * 8;

template <class T>
void put_le(std::vector<std::byte>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::byte>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
  }
}

template <class T>
T get_le(std::span<const std::byte> bytes, std::size_t offset) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<std::uint64_t>(bytes[offset + i]) << (8 * i);
  }
  return static_cast<T>(v);
}

// Uniform double in [0, 1) from the raw 64-bit engine output, so the
// generator is reproducible across standard library implementations.
double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

void CsrGraph::validate() const {
  using K = GraphFormatError::Kind;
  if (row_offsets.size() != num_vertices + 1) {
    throw GraphFormatError(K::kOffsetBounds, "row_offsets must hold V+1 entries");
  }
  if (row_offsets.front() != 0) {
    throw GraphFormatError(K::kOffsetBounds, "row_offsets[0] must be 0");
  }
  for (std::uint64_t v = 0; v < num_vertices; ++v) {
    if (row_offsets[v + 1] < row_offsets[v]) {
      throw GraphFormatError(K::kNonMonotonicOffsets,
                             "row_offsets decreases at vertex " + std::to_string(v + 1));
    }
  }
  if (row_offsets.back() != col_indices.size()) {
    throw GraphFormatError(K::kOffsetBounds, "row_offsets[V] must equal E");
  }
  for (std::size_t e = 0; e < col_indices.size(); ++e) {
    if (col_indices[e] >= num_vertices) {
      throw GraphFormatError(K::kColumnOutOfRange, "column index " + std::to_string(col_indices[e]) +
                                                       " out of range at edge " + std::to_string(e));
    }
  }
  if (!weights.empty() && weights.size() != col_indices.size()) {
    throw GraphFormatError(K::kWeightCount, "weights must hold E entries");
  }
}

std::vector<std::byte> encode_csr(const CsrGraph& graph) {
  std::vector<std::byte> out;
  out.reserve(kHeaderBytes + 8 * (graph.row_offsets.size() + graph.col_indices.size()) + 4 * graph.weights.size());
  for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
  put_le<std::uint64_t>(out, graph.num_vertices);
  put_le<std::uint64_t>(out, graph.num_edges());
  put_le<std::uint64_t>(out, graph.weighted() ? 1u : 0u);
  for (auto v : graph.row_offsets) put_le<std::uint64_t>(out, v);
  for (auto v : graph.col_indices) put_le<std::uint64_t>(out, v);
  for (auto v : graph.weights) put_le<std::uint32_t>(out, v);
  return out;
}

CsrGraph decode_csr(std::span<const std::byte> bytes) {
  using K = GraphFormatError::Kind;
  if (bytes.size() < kHeaderBytes) {
    throw GraphFormatError(K::kMalformedHeader, "file shorter than the 28-byte header");
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw GraphFormatError(K::kMalformedHeader, "bad magic, expected \"CSR1\"");
  }
  const auto v = get_le<std::uint64_t>(bytes, 4);
  const auto e = get_le<std::uint64_t>(bytes, 12);
  const auto flags = get_le<std::uint64_t>(bytes, 20);
  if ((flags & ~std::uint64_t{1}) != 0) {
    throw GraphFormatError(K::kMalformedHeader, "unknown flag bits set");
  }
  const bool has_weights = (flags & 1) != 0;
  // Reject sizes that cannot possibly be backed by the payload before allocating.
  const std::size_t payload = bytes.size() - kHeaderBytes;
  if (v >= payload / 8 || e > payload / 8) {
    throw GraphFormatError(K::kTruncated, "header counts exceed file size");
  }
  const std::size_t expected = 8 * (v + 1) + 8 * e + (has_weights ? 4 * e : 0);
  if (payload != expected) {
    throw GraphFormatError(payload < expected ? K::kTruncated : K::kMalformedHeader,
                           "payload is " + std::to_string(payload) + " bytes, header implies " +
                               std::to_string(expected));
  }

  CsrGraph g;
  g.num_vertices = v;
  g.row_offsets.resize(v + 1);
  g.col_indices.resize(e);
  std::size_t at = kHeaderBytes;
  for (auto& x : g.row_offsets) {
    x = get_le<std::uint64_t>(bytes, at);
    at += 8;
  }
  for (auto& x : g.col_indices) {
    x = get_le<std::uint64_t>(bytes, at);
    at += 8;
  }
  if (has_weights) {
    g.weights.resize(e);
    for (auto& x : g.weights) {
      x = get_le<std::uint32_t>(bytes, at);
      at += 4;
    }
  }
  g.validate();
  return g;
}

CsrGraph load_csr(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_csr(std::as_bytes(std::span<const char>(raw)));
}

void write_csr(const CsrGraph& graph, const std::filesystem::path& path) {
  graph.validate();
  const auto bytes = encode_csr(graph);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

CsrGraph csr_from_edges(std::uint64_t num_vertices, std::span<const Edge> edges, bool weighted) {
  CsrGraph g;
  g.num_vertices = num_vertices;
  g.row_offsets.assign(num_vertices + 1, 0);
  for (const auto& e : edges) {
    if (e.src >= num_vertices || e.dst >= num_vertices) {
      throw GraphFormatError(GraphFormatError::Kind::kColumnOutOfRange, "edge endpoint out of range");
    }
    ++g.row_offsets[e.src + 1];
  }
  for (std::uint64_t v = 0; v < num_vertices; ++v) g.row_offsets[v + 1] += g.row_offsets[v];
  g.col_indices.resize(edges.size());
  if (weighted) g.weights.resize(edges.size());
  std::vector<std::uint64_t> cursor(g.row_offsets.begin(), g.row_offsets.end() - 1);
  for (const auto& e : edges) {
    const auto slot = cursor[e.src]++;
    g.col_indices[slot] = e.dst;
    if (weighted) g.weights[slot] = e.weight;
  }
  return g;
}

CsrGraph read_edge_list(const std::filesystem::path& path, std::uint64_t num_vertices) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<Edge> edges;
  bool weighted = false;
  bool any_unweighted = false;
  std::uint64_t max_id = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    Edge e;
    if (!(fields >> e.src >> e.dst)) continue;
    if (std::uint64_t w; fields >> w) {
      e.weight = static_cast<std::uint32_t>(w);
      weighted = true;
    } else {
      any_unweighted = true;
    }
    max_id = std::max({max_id, e.src + 1, e.dst + 1});
    edges.push_back(e);
  }
  if (weighted && any_unweighted) {
    throw GraphFormatError(GraphFormatError::Kind::kWeightCount, "edge list mixes weighted and unweighted lines");
  }
  return csr_from_edges(std::max(num_vertices, max_id), edges, weighted);
}

CsrGraph generate_rmat(std::uint32_t scale, std::uint32_t edge_factor, std::uint64_t seed, RmatParams params) {
  if (scale > 20) throw std::invalid_argument("rmat scale above 20 is outside desk scale");
  if (edge_factor < 1) throw std::invalid_argument("edge_factor must be >= 1");
  const std::uint64_t n = std::uint64_t{1} << scale;
  const std::uint64_t m = n * edge_factor;
  const double ab = params.a + params.b;
  const double abc = ab + params.c;

  std::mt19937_64 rng(seed);
  std::vector<Edge> edges(m);
  for (auto& e : edges) {
    std::uint64_t src = 0;
    std::uint64_t dst = 0;
    for (std::uint32_t level = 0; level < scale; ++level) {
      const double r = unit_double(rng);
      const std::uint64_t src_bit = r >= ab ? 1 : 0;
      const std::uint64_t dst_bit = (r >= params.a && r < ab) || r >= abc ? 1 : 0;
      src = (src << 1) | src_bit;
      dst = (dst << 1) | dst_bit;
    }
    e.src = src;
    e.dst = dst;
  }
  return csr_from_edges(n, edges, false);
}

void assign_random_weights(CsrGraph& graph, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  graph.weights.resize(graph.num_edges());
  for (auto& w : graph.weights) w = static_cast<std::uint32_t>(rng() % 255) + 1;
}

CsrGraph symmetrize(const CsrGraph& graph) {
  std::vector<Edge> edges;
  edges.reserve(2 * graph.num_edges());
  for (std::uint64_t u = 0; u < graph.num_vertices; ++u) {
    for (auto e = graph.row_offsets[u]; e < graph.row_offsets[u + 1]; ++e) {
      const auto w = graph.weighted() ? graph.weights[e] : 1u;
      edges.push_back({u, graph.col_indices[e], w});
      edges.push_back({graph.col_indices[e], u, w});
    }
  }
  return csr_from_edges(graph.num_vertices, edges, graph.weighted());
}

std::uint64_t Partition::chunk_begin(std::uint64_t tile) const {
  return std::min(array_len, tile * chunk_size);
}

std::uint64_t Partition::chunk_length(std::uint64_t tile) const {
  return std::min(array_len, (tile + 1) * chunk_size) - chunk_begin(tile);
}

Partition partition(std::uint64_t array_len, std::uint64_t num_tiles) {
  if (num_tiles < 1) throw std::invalid_argument("partition needs at least one tile");
  return Partition{array_len, num_tiles, ceil_div(array_len, num_tiles)};
}

}  // namespace tascade
