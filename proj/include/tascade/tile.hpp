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
#include <optional>
#include <span>
#include <vector>

#include "tascade/common.hpp"
#include "tascade/geometry.hpp"
#include "tascade/message.hpp"
#include "tascade/metrics.hpp"
#include "tascade/proxy_cache.hpp"
#include "tascade/ring_queue.hpp"

namespace tascade {

/// Task input queue whose occupancy is also readable as a registered
/// (previous-cycle) value, the form the router's capture logic samples.
class InputQueue {
 public:
  InputQueue() = default;
  explicit InputQueue(std::size_t capacity) : queue_(capacity) {}

  std::size_t size() const { return queue_.size(); }
  std::size_t capacity() const { return queue_.capacity(); }
  std::size_t free() const { return queue_.free(); }
  bool empty() const { return queue_.empty(); }
  bool full() const { return queue_.full(); }
  const Invocation& front() const { return queue_.front(); }

  void push_back(const Invocation& inv, Cycle now) {
    touch(now);
    queue_.push_back(inv);
  }
  void push_front(const Invocation& inv, Cycle now) {
    touch(now);
    queue_.push_front(inv);
  }
  Invocation pop_front(Cycle now) {
    touch(now);
    return queue_.pop_front();
  }

  std::size_t registered_size(Cycle now) const { return stamp_ == now ? prev_size_ : queue_.size(); }

  template <class F>
  void for_each(F&& f) const {
    queue_.for_each(f);
  }

 private:
  void touch(Cycle now) {
    if (stamp_ != now) {
      prev_size_ = queue_.size();
      stamp_ = now;
    }
  }

  RingQueue<Invocation> queue_;
  std::size_t prev_size_ = 0;
  Cycle stamp_ = ~Cycle{0};
};

/// Deduplicated work list of T1 invocations over the tile's owned chunk of
/// the frontier array. It lives in the scratchpad, so it always has room
/// for every owned element.
class Frontier {
 public:
  Frontier() = default;
  Frontier(std::uint64_t base, std::uint64_t length) : base_(base), queued_(length, 0), queue_(length) {}

  /// Returns false when `index` is already queued.
  bool push(std::uint64_t index);
  std::uint64_t pop();
  std::size_t size() const { return queue_.size(); }
  bool empty() const { return queue_.empty(); }
  std::uint64_t base() const { return base_; }
  std::uint64_t length() const { return queued_.size(); }

 private:
  std::uint64_t base_ = 0;
  std::vector<std::uint8_t> queued_;
  RingQueue<std::uint64_t> queue_;
};

/// Static properties of one task type.
struct TaskDescriptor {
  std::uint8_t channel = 0;
  std::uint32_t base_cost = 5;
  std::array<std::uint32_t, kNumChannels> max_emissions{};  // worst-case OQ pushes per channel
  bool may_touch_pcache = false;
};

struct PuState {
  std::uint32_t remaining = 0;
  std::uint8_t channel = 0;
  std::vector<Message> pending;  // committed to the OQs when the task retires
  bool idle() const { return remaining == 0; }
};

struct TileState {
  TileState(TileId id, Coord coord, std::size_t iq_capacity, std::size_t oq_capacity);

  TileId id;
  Coord coord;
  std::array<InputQueue, kNumChannels> iqs;  // iqs[kFrontier] is unused, see `frontier`
  Frontier frontier;
  std::array<RingQueue<Message>, kNumChannels> oqs;
  std::optional<ProxyCache> pcache;
  PuState pu;
  TileCounters counters;

  std::size_t queued(std::uint8_t channel) const {
    return channel == kFrontier ? frontier.size() : iqs[channel].size();
  }
  bool oqs_empty() const;
  std::size_t iq_total() const;
  std::size_t oq_total() const;
};

/// Picks the task to run next: among schedulable non-empty queues, the one
/// with the highest occupancy, ties to the lowest channel. A queue is
/// schedulable when every OQ it may push to has room for the task's worst
/// case, plus one slot on the P-cache propagation channel for tasks that may
/// touch the P-cache. Returns nullopt when nothing can run.
std::optional<std::uint8_t> tsu_select(const TileState& tile, std::span<const TaskDescriptor> tasks,
                                       bool frontier_enabled);

}  // namespace tascade
