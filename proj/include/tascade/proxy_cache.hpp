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

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "tascade/common.hpp"
#include "tascade/geometry.hpp"

namespace tascade {

enum class WritePolicy { kWriteThrough, kWriteBack };

std::string_view to_string(WritePolicy p);

/// Associative, commutative reduction with `identity` as its neutral element.
struct ReduceOp {
  enum class Kind { kMin, kAdd, kCustom };
  Kind kind = Kind::kMin;
  std::function<Word(Word, Word)> custom;

  static ReduceOp min() { return {Kind::kMin, {}}; }
  static ReduceOp add() { return {Kind::kAdd, {}}; }
  static ReduceOp custom_op(std::function<Word(Word, Word)> f) { return {Kind::kCustom, std::move(f)}; }

  Word operator()(Word a, Word b) const {
    switch (kind) {
      case Kind::kMin: return a < b ? a : b;
      case Kind::kAdd: return a + b;  // wraps mod 2^32, still exactly associative
      case Kind::kCustom: return custom(a, b);
    }
    return a;
  }
};

/// The five software-visible P-cache registers.
struct ProxyCacheConfig {
  std::uint64_t local_fraction_base = 0;
  std::uint64_t local_fraction_len = 0;
  std::uint64_t capacity = 0;
  WritePolicy policy = WritePolicy::kWriteThrough;
  std::uint8_t propagate_channel = kReduce;
  Word default_value = kInfinity;
};

struct ProxyCacheCounters {
  std::uint64_t reads = 0;
  std::uint64_t updates = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t evictions = 0;
  std::uint64_t filtered = 0;
  std::uint64_t coalesced = 0;
  std::uint64_t emissions = 0;
};

/// An (index, value) pair the cache pushes toward the element's owner.
struct Writeback {
  std::uint64_t global_index = 0;
  Word value = 0;
};

struct UpdateResult {
  bool updated = false;
  std::optional<Writeback> emission;
};

/// Direct-mapped, one element per line, over a tile's local proxy fraction.
/// Line = offset mod capacity, tag = offset / capacity. Read misses return
/// the default value and do not allocate.
class ProxyCache {
 public:
  ProxyCache(ProxyCacheConfig config, ProxyAddressMap map, ReduceOp op);

  const ProxyCacheConfig& config() const { return config_; }
  const ProxyCacheCounters& counters() const { return counters_; }
  std::uint32_t tag_bits() const { return tag_bits_; }

  /// Throws SimulationFault if this tile is not the proxy of `global_index`.
  Word read(std::uint64_t global_index);

  /// Write-through: store and emit only when the reduction changes the value
  /// (min filtering). Write-back: reduce into the line, evicting a
  /// conflicting dirty line first; conflict-free updates emit nothing.
  UpdateResult update(std::uint64_t global_index, Word value);

  /// Write-back only: emits and invalidates the lowest-indexed dirty line.
  std::optional<Writeback> idle_flush();

  std::size_t dirty_lines() const { return dirty_.size(); }
  std::size_t valid_lines() const { return valid_count_; }
  bool clean() const { return dirty_.empty(); }

  /// Sum of dirty line values, for add-reduction conservation checks.
  template <class F>
  void for_each_dirty(F&& f) const {
    for (auto line : dirty_) f(map_.to_global(lines_[line].tag * config_.capacity + line), lines_[line].value);
  }

 private:
  struct Line {
    bool valid = false;
    bool dirty = false;
    std::uint64_t tag = 0;
    Word value = 0;
  };

  std::uint64_t local_offset(std::uint64_t global_index) const;
  Writeback evict(std::uint64_t line);

  ProxyCacheConfig config_;
  ProxyAddressMap map_;
  ReduceOp op_;
  std::uint32_t tag_bits_ = 0;
  std::vector<Line> lines_;
  std::set<std::uint64_t> dirty_;
  std::size_t valid_count_ = 0;
  ProxyCacheCounters counters_;
};

}  // namespace tascade
