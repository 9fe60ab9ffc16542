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

#include <compare>
#include <cstdint>
#include <optional>

#include "tascade/common.hpp"
#include "tascade/graph.hpp"

namespace tascade {

struct Coord {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  friend auto operator<=>(const Coord&, const Coord&) = default;
};

/// Tile grid subdivided into square proxy regions of width W.
/// Tiles are linearized row-major: id = y * width + x.
class GridGeometry {
 public:
  /// Throws std::invalid_argument unless both dimensions and W are powers of
  /// two and W divides both dimensions.
  GridGeometry(std::uint32_t width, std::uint32_t height, std::uint32_t region_width);

  std::uint32_t width() const { return width_; }
  std::uint32_t height() const { return height_; }
  std::uint32_t region_width() const { return region_width_; }
  std::uint32_t num_tiles() const { return width_ * height_; }
  std::uint32_t regions_x() const { return width_ / region_width_; }
  std::uint32_t regions_y() const { return height_ / region_width_; }
  std::uint32_t num_regions() const { return regions_x() * regions_y(); }

  Coord coord(TileId id) const { return {id % width_, id / width_}; }
  TileId id(Coord c) const { return c.y * width_ + c.x; }

  Coord intra_region(Coord c) const { return {c.x & mask_, c.y & mask_}; }
  Coord region_origin(Coord c) const { return {c.x & ~mask_, c.y & ~mask_}; }
  std::uint32_t region_index(Coord c) const { return (c.y / region_width_) * regions_x() + c.x / region_width_; }

 private:
  std::uint32_t width_;
  std::uint32_t height_;
  std::uint32_t region_width_;
  std::uint32_t mask_;
};

/// Owner of a global element; throws std::out_of_range past the array end.
Coord owner_tile(std::uint64_t global_index, const Partition& part, const GridGeometry& geom);

/// The tile in `source`'s region sharing the owner's intra-region coordinates.
Coord proxy_tile(Coord owner, Coord source, const GridGeometry& geom);
Coord proxy_tile(std::uint64_t global_index, Coord source, const Partition& part, const GridGeometry& geom);

/// Inputs of the region/P-cache sizing heuristic, all in elements except the
/// dimensionless ratio C between the local proxy fraction and the P-cache.
struct SizingInputs {
  std::uint64_t p_array = 0;
  std::uint64_t p_cache_max = 0;
  std::uint64_t ratio_c = 16;
};

/// Smallest configurable region width, sqrt(P_array / (P_cache_max * C)),
/// rounded up to a power of two (1 when the array already fits).
std::uint32_t w_min(const SizingInputs& in);

/// Actual P-cache size min(P_array / max(16, W_min)^2, P_cache_max).
/// Throws std::invalid_argument if w_selected < w_min(in).
std::uint64_t p_cache_size(const SizingInputs& in, std::uint32_t w_selected);

/// log2(local_fraction / capacity); both must be powers of two with capacity <= fraction.
std::uint32_t pcache_tag_bits(std::uint64_t local_fraction_elems, std::uint64_t cache_capacity_elems);

/// Maps global reduction-array indices onto the local proxy-array fraction
/// of one tile. Offsets are grouped by the owner's region, so a tile's
/// fraction spans num_regions * chunk_size elements (P_array / W^2 when the
/// array divides evenly).
class ProxyAddressMap {
 public:
  ProxyAddressMap(const Partition& part, const GridGeometry& geom, Coord tile);

  std::uint64_t fraction_length() const { return fraction_len_; }

  /// Local offset of `global_index`, or nullopt if this tile is not its proxy.
  std::optional<std::uint64_t> to_local(std::uint64_t global_index) const;
  std::uint64_t to_global(std::uint64_t local_offset) const;

 private:
  Partition part_;
  GridGeometry geom_;
  Coord intra_;
  std::uint64_t fraction_len_;
};

}  // namespace tascade
