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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tascade {

/// Sparse graph / square sparse matrix in compressed sparse row form.
struct CsrGraph {
  std::uint64_t num_vertices = 0;
  std::vector<std::uint64_t> row_offsets{0};  // num_vertices + 1 entries
  std::vector<std::uint64_t> col_indices;
  std::vector<std::uint32_t> weights;  // empty when unweighted

  std::uint64_t num_edges() const { return col_indices.size(); }
  bool weighted() const { return !weights.empty(); }
  std::uint64_t degree(std::uint64_t v) const { return row_offsets[v + 1] - row_offsets[v]; }

  /// Throws GraphFormatError naming the first violated invariant.
  void validate() const;

  friend bool operator==(const CsrGraph&, const CsrGraph&) = default;
};

class GraphFormatError : public std::runtime_error {
 public:
  enum class Kind { kMalformedHeader, kTruncated, kNonMonotonicOffsets, kOffsetBounds, kColumnOutOfRange, kWeightCount };

  GraphFormatError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Binary CSR file: "CSR1", V u64, E u64, flags u64 (bit0 = weights), then
/// (V+1) u64 offsets, E u64 columns and optionally E u32 weights. Little-endian.
std::vector<std::byte> encode_csr(const CsrGraph& graph);
CsrGraph decode_csr(std::span<const std::byte> bytes);
CsrGraph load_csr(const std::filesystem::path& path);
void write_csr(const CsrGraph& graph, const std::filesystem::path& path);

struct Edge {
  std::uint64_t src = 0;
  std::uint64_t dst = 0;
  std::uint32_t weight = 1;
};

/// Stable counting sort by source; duplicate edges and self-loops are kept.
CsrGraph csr_from_edges(std::uint64_t num_vertices, std::span<const Edge> edges, bool weighted);

/// Whitespace-separated "src dst [weight]" lines; '#' starts a comment.
CsrGraph read_edge_list(const std::filesystem::path& path, std::uint64_t num_vertices = 0);

struct RmatParams {
  double a = 0.57;
  double b = 0.19;
  double c = 0.19;
};

/// Raw R-MAT output: V = 2^scale, E = edge_factor * V, no deduplication.
CsrGraph generate_rmat(std::uint32_t scale, std::uint32_t edge_factor, std::uint64_t seed,
                       RmatParams params = {});

/// Attaches uniform integer weights in [1, 255].
void assign_random_weights(CsrGraph& graph, std::uint64_t seed);

/// Adds the reverse of every edge (for weakly connected components).
CsrGraph symmetrize(const CsrGraph& graph);

/// Equal-chunk distribution of one array across the tile grid.
struct Partition {
  std::uint64_t array_len = 0;
  std::uint64_t num_tiles = 1;
  std::uint64_t chunk_size = 0;

  std::uint64_t owner(std::uint64_t index) const { return index / chunk_size; }
  std::uint64_t chunk_begin(std::uint64_t tile) const;
  std::uint64_t chunk_length(std::uint64_t tile) const;
};

/// chunk_size = ceil(array_len / num_tiles); the last non-empty chunk may be short.
Partition partition(std::uint64_t array_len, std::uint64_t num_tiles);

}  // namespace tascade
