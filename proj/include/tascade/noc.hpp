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
#include <string>
#include <string_view>
#include <vector>

#include "tascade/common.hpp"
#include "tascade/geometry.hpp"
#include "tascade/message.hpp"
#include "tascade/ring_queue.hpp"

namespace tascade {

enum class Topology { kMesh, kTorus, kMultichipTorus };
enum class Port : std::uint8_t { kNorth = 0, kSouth = 1, kEast = 2, kWest = 3, kLocal = 4 };
inline constexpr std::uint32_t kNumPorts = 5;

enum class CascadeMode { kNone, kAlways, kSelective };
enum class CaptureDecision { kDeliverLocal, kCaptureAsProxy, kForward };

Topology parse_topology(std::string_view name);
std::string_view to_string(Topology t);
std::string_view to_string(Port p);

constexpr Port opposite(Port p) {
  switch (p) {
    case Port::kNorth: return Port::kSouth;
    case Port::kSouth: return Port::kNorth;
    case Port::kEast: return Port::kWest;
    case Port::kWest: return Port::kEast;
    default: return Port::kLocal;
  }
}

/// X-then-Y dimension-ordered output port. On a torus each dimension takes
/// the shorter ring direction, ties going the positive way (East / South,
/// where South is +y).
Port route_step(Coord here, Coord dest, Topology topology, const GridGeometry& geom);

/// Number of links a message crosses from `src` to `dest` under route_step.
std::uint32_t route_distance(Coord src, Coord dest, Topology topology, const GridGeometry& geom);

/// Per-message router signals, the inputs of the capture predicate.
struct CaptureSignals {
  bool is_dest = false;
  bool is_proxy_x = false;
  bool is_proxy_y = false;
  bool iq_below_half = false;      // proxy-task IQ below half capacity, last cycle
  bool opposite_port_full = false;  // straight-ahead output buffer full, last cycle
};

CaptureDecision capture_decision(const CaptureSignals& s, CascadeMode mode);

/// Region-mask comparison of intra-region coordinates.
CaptureSignals capture_signals(Coord here, Coord owner, const GridGeometry& geom, bool iq_below_half,
                               bool opposite_port_full);

struct NetworkConfig {
  Topology topology = Topology::kTorus;
  std::uint32_t buffer_flits = 8;  // per input port, per channel, per VC
  std::uint32_t router_delay = 1;
  std::uint32_t link_latency = 1;
  std::uint32_t boundary_latency = 20;  // extra cycles on chip-crossing links
  std::uint32_t chip_pane = 32;
  std::uint32_t num_channels = kNumChannels;
  CascadeMode cascade = CascadeMode::kNone;
  std::uint8_t capturable_channel = kReduce;
  std::uint8_t proxy_channel = kProxy;
};

/// Receives messages leaving the network at their destination (or at a
/// capturing proxy tile) and exposes the registered IQ signal the router reads.
class DeliverySink {
 public:
  virtual ~DeliverySink() = default;
  virtual bool can_accept(TileId tile, std::uint8_t channel) const = 0;
  virtual void accept(TileId tile, std::uint8_t channel, const Message& msg, bool captured) = 0;
  virtual bool iq_below_half(TileId tile, std::uint8_t channel) const = 0;
};

struct NetworkCounters {
  std::uint64_t injected = 0;
  std::uint64_t delivered = 0;
  std::uint64_t captured = 0;
  std::uint64_t flit_hops = 0;
  std::uint64_t boundary_flit_hops = 0;
  std::uint64_t delivered_hops = 0;
  std::uint64_t captures_declined_full = 0;  // capture chosen but proxy IQ had no room
};

/// Cycle-stepped routers with per-port, per-channel (and per-VC on tori)
/// input buffers. Messages move whole (virtual cut-through of 1-3 flits):
/// a switched message holds its output port for size_flits cycles and
/// becomes eligible at the next router after link latency + router delay.
class Network {
 public:
  Network(const GridGeometry& geom, NetworkConfig config);

  const NetworkConfig& config() const { return config_; }
  const GridGeometry& geometry() const { return geom_; }
  Cycle now() const { return now_; }

  bool can_inject(TileId tile, const Message& msg) const;
  /// Places `msg` in the router's local input buffer; throws if it has no room.
  void inject(TileId tile, Message msg);

  /// Switches every router once; returns the number of flits that crossed an
  /// output port (links and ejection) during this cycle.
  std::uint64_t advance_cycle(DeliverySink& sink);

  /// Jumps the clock forward; only legal while nothing is buffered or in transit.
  void skip_to(Cycle cycle);

  std::uint64_t in_flight() const { return counters_.injected - counters_.delivered - counters_.captured; }
  std::uint64_t buffered_flits() const { return buffered_flits_; }
  std::uint64_t capacity_flits() const;
  bool idle() const { return in_flight() == 0 && max_busy_until_ <= now_; }
  const NetworkCounters& counters() const { return counters_; }
  /// True if the router moved a flit during the last advanced cycle.
  bool router_active(TileId tile) const { return active_at_[tile] + 1 == now_; }
  /// Routers active during the last advanced cycle, in id order.
  const std::vector<TileId>& active_routers() const { return active_list_; }
  std::uint64_t router_active_cycles(TileId tile) const { return router_active_cycles_[tile]; }
  std::uint32_t num_vcs() const { return num_vcs_; }

  template <class F>
  void for_each_message(F&& f) const {
    for (const auto& b : buffers_) b.queue.for_each(f);
  }

 private:
  struct Target {
    Port out = Port::kLocal;
    TileId next = 0;
    std::uint8_t channel = 0;
    std::uint8_t vc = 0;
    bool captured = false;
    bool wrap = false;
    bool boundary = false;
    bool declined = false;
  };

  struct Buffer {
    RingQueue<Message> queue;
    std::uint32_t flits = 0;
    std::uint32_t prev_flits = 0;
    Cycle stamp = ~Cycle{0};
    // Head message summary and its route, valid until the head leaves. Heads
    // that may be captured are re-routed every cycle instead.
    Cycle head_ready = 0;
    std::uint32_t head_size = 0;
    bool routed = false;
    Target route;
  };

  std::size_t slot_index(Port port, std::uint32_t channel, std::uint32_t vc) const {
    return (static_cast<std::size_t>(port) * config_.num_channels + channel) * num_vcs_ + vc;
  }
  Buffer& buffer(TileId tile, std::size_t slot) { return buffers_[tile * slots_per_router_ + slot]; }
  const Buffer& buffer(TileId tile, std::size_t slot) const { return buffers_[tile * slots_per_router_ + slot]; }

  void touch(Buffer& b) {
    if (b.stamp != now_) {
      b.prev_flits = b.flits;
      b.stamp = now_;
    }
  }
  std::uint32_t registered_flits(const Buffer& b) const { return b.stamp == now_ ? b.prev_flits : b.flits; }

  struct Link {
    TileId next = 0;
    bool valid = false;
    bool wrap = false;
    bool boundary = false;
  };

  bool neighbor(TileId tile, Port out, TileId& next, bool& wrap) const;
  bool crosses_chip(Coord a, Coord b) const;
  bool opposite_port_full(TileId tile, Port in, const Message& msg) const;
  bool capture_eligible(TileId tile, Port in, const Message& msg) const;
  void resolve(TileId tile, Port in, const Message& msg, DeliverySink& sink, Target& t) const;
  bool can_move(TileId tile, const Target& t, std::uint32_t size, DeliverySink& sink) const;
  void set_head(Buffer& b);
  void push(TileId tile, std::size_t slot, Message msg);
  Message pop(TileId tile, std::size_t slot);
  void step_router(TileId tile, DeliverySink& sink);

  GridGeometry geom_;
  NetworkConfig config_;
  std::uint32_t num_vcs_;
  std::size_t slots_per_router_;
  std::vector<Buffer> buffers_;
  std::vector<std::array<Link, 4>> links_;
  std::vector<std::uint64_t> nonempty_;
  std::vector<std::array<Cycle, kNumPorts>> busy_until_;
  std::vector<std::array<std::uint32_t, kNumPorts>> rr_last_;
  std::vector<Cycle> router_busy_until_;
  std::vector<std::uint64_t> active_bits_;  // routers with buffered messages or busy ports
  std::vector<Cycle> active_at_;
  std::vector<TileId> active_list_;
  std::vector<std::uint64_t> router_active_cycles_;
  Cycle max_busy_until_ = 0;
  Cycle now_ = 0;
  std::uint64_t buffered_flits_ = 0;
  NetworkCounters counters_;
};

}  // namespace tascade
