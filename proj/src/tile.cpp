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

#include "tascade/tile.hpp"

#include <string>

namespace tascade {

bool Frontier::push(std::uint64_t index) {
  const std::uint64_t slot = index - base_;
  if (index < base_ || slot >= queued_.size()) {
    throw SimulationFault("frontier push of non-owned index " + std::to_string(index));
  }
  if (queued_[slot]) return false;
  queued_[slot] = 1;
  queue_.push_back(slot);
  return true;
}

std::uint64_t Frontier::pop() {
  const std::uint64_t slot = queue_.pop_front();
  queued_[slot] = 0;
  return base_ + slot;
}

TileState::TileState(TileId tile_id, Coord tile_coord, std::size_t iq_capacity, std::size_t oq_capacity)
    : id(tile_id), coord(tile_coord) {
  for (std::uint32_t ch = 0; ch < kNumChannels; ++ch) {
    iqs[ch] = InputQueue(ch == kFrontier ? 0 : iq_capacity);
    oqs[ch] = RingQueue<Message>(oq_capacity);
  }
}

bool TileState::oqs_empty() const {
  for (const auto& q : oqs) {
    if (!q.empty()) return false;
  }
  return true;
}

std::size_t TileState::iq_total() const {
  std::size_t n = frontier.size();
  for (const auto& q : iqs) n += q.size();
  return n;
}

std::size_t TileState::oq_total() const {
  std::size_t n = 0;
  for (const auto& q : oqs) n += q.size();
  return n;
}

std::optional<std::uint8_t> tsu_select(const TileState& tile, std::span<const TaskDescriptor> tasks,
                                       bool frontier_enabled) {
  std::optional<std::uint8_t> best;
  std::size_t best_occupancy = 0;
  for (const auto& task : tasks) {
    if (task.channel == kFrontier && !frontier_enabled) continue;
    const std::size_t occupancy = tile.queued(task.channel);
    if (occupancy == 0) continue;
    bool fits = true;
    for (std::uint32_t ch = 0; ch < kNumChannels && fits; ++ch) {
      fits = tile.oqs[ch].free() >= task.max_emissions[ch];
    }
    if (fits && task.may_touch_pcache && tile.pcache) {
      fits = tile.oqs[tile.pcache->config().propagate_channel].free() >= 1;
    }
    if (!fits) continue;
    if (!best || occupancy > best_occupancy || (occupancy == best_occupancy && task.channel < *best)) {
      best = task.channel;
      best_occupancy = occupancy;
    }
  }
  return best;
}

}  // namespace tascade
