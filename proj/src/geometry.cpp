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

#include "tascade/geometry.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tascade {

GridGeometry::GridGeometry(std::uint32_t width, std::uint32_t height, std::uint32_t region_width)
    : width_(width), height_(height), region_width_(region_width), mask_(region_width - 1) {
  if (!is_pow2(width) || !is_pow2(height)) {
    throw std::invalid_argument("grid dimensions must be powers of two");
  }
  if (!is_pow2(region_width)) throw std::invalid_argument("region width must be a power of two");
  if (width % region_width != 0 || height % region_width != 0) {
    throw std::invalid_argument("region width " + std::to_string(region_width) + " must divide the grid " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
}

Coord owner_tile(std::uint64_t global_index, const Partition& part, const GridGeometry& geom) {
  if (global_index >= part.array_len) {
    throw std::out_of_range("index " + std::to_string(global_index) + " beyond array of " +
                            std::to_string(part.array_len));
  }
  return geom.coord(static_cast<TileId>(part.owner(global_index)));
}

Coord proxy_tile(Coord owner, Coord source, const GridGeometry& geom) {
  const Coord origin = geom.region_origin(source);
  const Coord intra = geom.intra_region(owner);
  return {origin.x + intra.x, origin.y + intra.y};
}

Coord proxy_tile(std::uint64_t global_index, Coord source, const Partition& part, const GridGeometry& geom) {
  return proxy_tile(owner_tile(global_index, part, geom), source, geom);
}

std::uint32_t w_min(const SizingInputs& in) {
  if (in.p_array == 0 || in.p_cache_max == 0 || in.ratio_c == 0) {
    throw std::invalid_argument("sizing inputs must be strictly positive");
  }
  // Smallest power of two W with W^2 * P_cache_max * C >= P_array.
  const unsigned __int128 budget = static_cast<unsigned __int128>(in.p_cache_max) * in.ratio_c;
  std::uint32_t w = 1;
  while (static_cast<unsigned __int128>(w) * w * budget < in.p_array) w <<= 1;
  return w;
}

std::uint64_t p_cache_size(const SizingInputs& in, std::uint32_t w_selected) {
  const std::uint32_t wm = w_min(in);
  if (w_selected < wm) {
    throw std::invalid_argument("selected region width " + std::to_string(w_selected) + " is below W_min " +
                                std::to_string(wm));
  }
  const std::uint64_t divisor = std::uint64_t{std::max<std::uint32_t>(16, wm)};
  return std::min(in.p_array / (divisor * divisor), in.p_cache_max);
}

std::uint32_t pcache_tag_bits(std::uint64_t local_fraction_elems, std::uint64_t cache_capacity_elems) {
  if (!is_pow2(local_fraction_elems) || !is_pow2(cache_capacity_elems)) {
    throw std::invalid_argument("P-cache fraction and capacity must be powers of two");
  }
  if (cache_capacity_elems > local_fraction_elems) {
    throw std::invalid_argument("P-cache capacity exceeds the local proxy fraction");
  }
  return log2_exact(local_fraction_elems / cache_capacity_elems);
}

ProxyAddressMap::ProxyAddressMap(const Partition& part, const GridGeometry& geom, Coord tile)
    : part_(part), geom_(geom), intra_(geom.intra_region(tile)),
      fraction_len_(std::uint64_t{geom.num_regions()} * part.chunk_size) {}

std::optional<std::uint64_t> ProxyAddressMap::to_local(std::uint64_t global_index) const {
  if (global_index >= part_.array_len) return std::nullopt;
  const auto owner_id = part_.owner(global_index);
  const Coord owner = geom_.coord(static_cast<TileId>(owner_id));
  if (geom_.intra_region(owner) != intra_) return std::nullopt;
  return std::uint64_t{geom_.region_index(owner)} * part_.chunk_size + (global_index - owner_id * part_.chunk_size);
}

std::uint64_t ProxyAddressMap::to_global(std::uint64_t local_offset) const {
  const auto region = static_cast<std::uint32_t>(local_offset / part_.chunk_size);
  const auto within = local_offset % part_.chunk_size;
  const std::uint32_t w = geom_.region_width();
  const Coord owner{(region % geom_.regions_x()) * w + intra_.x, (region / geom_.regions_x()) * w + intra_.y};
  return std::uint64_t{geom_.id(owner)} * part_.chunk_size + within;
}

}  // namespace tascade
