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
#include <limits>
#include <stdexcept>
#include <string>

namespace tascade {

/// 32-bit data word held in scratchpads and P-caches.
using Word = std::uint32_t;

/// Minimization sentinel: the largest representable data word.
inline constexpr Word kInfinity = std::numeric_limits<Word>::max();

using TileId = std::uint32_t;
using Cycle = std::uint64_t;

/// Channel ids shared by every workload's task chain.
///   kFrontier : T1, vertex/element exploration, always tile-local
///   kEdge     : T2, per-edge work at the edge-array owner
///   kReduce   : T3, reduction at the data owner
///   kProxy    : T3', reduction on the regional proxy copy
enum Channel : std::uint8_t { kFrontier = 0, kEdge = 1, kReduce = 2, kProxy = 3 };
inline constexpr std::uint32_t kNumChannels = 4;

/// Raised when the simulated machine reaches a state the model forbids
/// (a handler touching non-owned data, global non-progress, ...).
class SimulationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

constexpr std::uint32_t log2_exact(std::uint64_t v) {
  std::uint32_t r = 0;
  while (v > 1) {
    v >>= 1;
    ++r;
  }
  return r;
}

constexpr std::uint64_t next_pow2(std::uint64_t v) {
  std::uint64_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

constexpr std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

}  // namespace tascade
