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

#include "tascade/proxy_cache.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tascade {

std::string_view to_string(WritePolicy p) {
  return p == WritePolicy::kWriteThrough ? "write_through" : "write_back";
}

ProxyCache::ProxyCache(ProxyCacheConfig config, ProxyAddressMap map, ReduceOp op)
    : config_(config), map_(std::move(map)), op_(std::move(op)) {
  if (!is_pow2(config_.capacity)) throw std::invalid_argument("P-cache capacity must be a power of two");
  // The fraction register is padded to a power of two so tags stay bitwise.
  const std::uint64_t padded = next_pow2(std::max<std::uint64_t>(config_.local_fraction_len, 1));
  if (config_.capacity > padded) {
    throw std::invalid_argument("P-cache capacity exceeds the local proxy fraction");
  }
  tag_bits_ = pcache_tag_bits(padded, config_.capacity);
  lines_.resize(config_.capacity);
}

std::uint64_t ProxyCache::local_offset(std::uint64_t global_index) const {
  const auto offset = map_.to_local(global_index);
  if (!offset || *offset >= config_.local_fraction_len) {
    throw SimulationFault("P-cache access to index " + std::to_string(global_index) +
                          " outside this tile's proxy fraction");
  }
  return *offset;
}

Word ProxyCache::read(std::uint64_t global_index) {
  const auto offset = local_offset(global_index);
  ++counters_.reads;
  const Line& line = lines_[offset % config_.capacity];
  if (line.valid && line.tag == offset / config_.capacity) {
    ++counters_.hits;
    return line.value;
  }
  ++counters_.misses;
  return config_.default_value;
}

Writeback ProxyCache::evict(std::uint64_t index) {
  Line& line = lines_[index];
  Writeback wb{map_.to_global(line.tag * config_.capacity + index), line.value};
  if (line.dirty) dirty_.erase(index);
  line.valid = false;
  line.dirty = false;
  --valid_count_;
  ++counters_.evictions;
  return wb;
}

UpdateResult ProxyCache::update(std::uint64_t global_index, Word value) {
  const auto offset = local_offset(global_index);
  const std::uint64_t index = offset % config_.capacity;
  const std::uint64_t tag = offset / config_.capacity;
  Line& line = lines_[index];
  const bool hit = line.valid && line.tag == tag;
  ++counters_.updates;
  ++(hit ? counters_.hits : counters_.misses);

  const Word current = hit ? line.value : config_.default_value;
  const Word reduced = op_(current, value);
  UpdateResult result;

  if (config_.policy == WritePolicy::kWriteThrough) {
    if (reduced == current) {
      ++counters_.filtered;
      return result;
    }
    // The displaced value was already propagated when it was written.
    if (line.valid && !hit) evict(index);
    if (!line.valid) ++valid_count_;
    line = Line{true, false, tag, reduced};
    result.updated = true;
    result.emission = Writeback{global_index, reduced};
    ++counters_.emissions;
    return result;
  }

  if (reduced == current && op_.kind != ReduceOp::Kind::kAdd) {
    ++counters_.filtered;
    return result;
  }
  if (hit) {
    ++counters_.coalesced;
  } else {
    if (line.valid) {
      const bool was_dirty = line.dirty;
      Writeback wb = evict(index);
      if (was_dirty) {
        result.emission = wb;
        ++counters_.emissions;
      }
    }
    ++valid_count_;
  }
  line.valid = true;
  line.tag = tag;
  line.value = reduced;
  if (!line.dirty) {
    line.dirty = true;
    dirty_.insert(index);
  }
  result.updated = true;
  return result;
}

std::optional<Writeback> ProxyCache::idle_flush() {
  if (config_.policy != WritePolicy::kWriteBack || dirty_.empty()) return std::nullopt;
  const std::uint64_t index = *dirty_.begin();
  Writeback wb = evict(index);
  ++counters_.emissions;
  return wb;
}

}  // namespace tascade
