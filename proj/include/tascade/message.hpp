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

#include <array>
#include <cstdint>

#include "tascade/common.hpp"

namespace tascade {

/// Input of one task invocation as it sits in an input queue.
struct Invocation {
  std::uint64_t index = 0;
  std::array<std::uint64_t, 2> payload{};
};

/// A routed task invocation. The global index is the routing key; there is
/// no separate header, so the message is one flit for the index plus one
/// flit per payload word.
struct Message {
  std::uint64_t index = 0;
  std::array<std::uint64_t, 2> payload{};
  std::uint8_t channel = 0;
  std::uint8_t payload_words = 0;
  std::uint8_t vc = 0;
  std::uint8_t dim = 0;  // 0 = not moved yet, 1 = X, 2 = Y
  TileId dest = 0;
  TileId src = 0;
  std::uint32_t hops = 0;
  Cycle ready = 0;
  Cycle injected_at = 0;

  std::uint32_t size_flits() const { return 1u + payload_words; }
  Invocation invocation() const { return {index, payload}; }
};

inline constexpr std::uint32_t kMaxMessageFlits = 3;

}  // namespace tascade
