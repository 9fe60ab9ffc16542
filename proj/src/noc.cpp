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

#include "tascade/noc.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace tascade {

Topology parse_topology(std::string_view name) {
  if (name == "mesh") return Topology::kMesh;
  if (name == "torus") return Topology::kTorus;
  if (name == "multichip_torus") return Topology::kMultichipTorus;
  throw std::invalid_argument("unknown topology \"" + std::string(name) + "\"");
}

std::string_view to_string(Topology t) {
  switch (t) {
    case Topology::kMesh: return "mesh";
    case Topology::kTorus: return "torus";
    case Topology::kMultichipTorus: return "multichip_torus";
  }
  return "?";
}

std::string_view to_string(Port p) {
  switch (p) {
    case Port::kNorth: return "north";
    case Port::kSouth: return "south";
    case Port::kEast: return "east";
    case Port::kWest: return "west";
    case Port::kLocal: return "local";
  }
  return "?";
}

namespace {

// +1 for the positive direction, -1 for the negative one, 0 when aligned.
int ring_direction(std::uint32_t here, std::uint32_t dest, std::uint32_t size, bool wraps) {
  if (here == dest) return 0;
  if (!wraps) return dest > here ? 1 : -1;
  const std::uint32_t forward = (dest + size - here) % size;
  return forward <= size - forward ? 1 : -1;
}

std::uint32_t ring_distance(std::uint32_t a, std::uint32_t b, std::uint32_t size, bool wraps) {
  const std::uint32_t d = a > b ? a - b : b - a;
  return wraps ? std::min(d, size - d) : d;
}

}  // namespace

Port route_step(Coord here, Coord dest, Topology topology, const GridGeometry& geom) {
  const bool wraps = topology != Topology::kMesh;
  if (int dx = ring_direction(here.x, dest.x, geom.width(), wraps); dx != 0) {
    return dx > 0 ? Port::kEast : Port::kWest;
  }
  if (int dy = ring_direction(here.y, dest.y, geom.height(), wraps); dy != 0) {
    return dy > 0 ? Port::kSouth : Port::kNorth;
  }
  return Port::kLocal;
}

std::uint32_t route_distance(Coord src, Coord dest, Topology topology, const GridGeometry& geom) {
  const bool wraps = topology != Topology::kMesh;
  return ring_distance(src.x, dest.x, geom.width(), wraps) + ring_distance(src.y, dest.y, geom.height(), wraps);
}

CaptureDecision capture_decision(const CaptureSignals& s, CascadeMode mode) {
  if (s.is_dest) return CaptureDecision::kDeliverLocal;
  const bool is_proxy = s.is_proxy_x && s.is_proxy_y;
  switch (mode) {
    case CascadeMode::kNone:
      return CaptureDecision::kForward;
    case CascadeMode::kAlways:
      return is_proxy ? CaptureDecision::kCaptureAsProxy : CaptureDecision::kForward;
    case CascadeMode::kSelective:
      return is_proxy && (s.iq_below_half || s.opposite_port_full) ? CaptureDecision::kCaptureAsProxy
                                                                   : CaptureDecision::kForward;
  }
  return CaptureDecision::kForward;
}

CaptureSignals capture_signals(Coord here, Coord owner, const GridGeometry& geom, bool iq_below_half,
                               bool opposite_port_full) {
  const Coord a = geom.intra_region(here);
  const Coord b = geom.intra_region(owner);
  return {here == owner, a.x == b.x, a.y == b.y, iq_below_half, opposite_port_full};
}

Network::Network(const GridGeometry& geom, NetworkConfig config)
    : geom_(geom), config_(config), num_vcs_(config.topology == Topology::kMesh ? 1 : 2) {
  if (config_.buffer_flits < kMaxMessageFlits) {
    throw std::invalid_argument("router buffers must hold at least one maximum-size message");
  }
  if (config_.link_latency + config_.router_delay == 0) {
    throw std::invalid_argument("a hop must take at least one cycle");
  }
  if (config_.num_channels == 0 || kNumPorts * config_.num_channels * num_vcs_ > 64) {
    throw std::invalid_argument("unsupported channel count");
  }
  slots_per_router_ = kNumPorts * config_.num_channels * num_vcs_;
  const std::size_t tiles = geom_.num_tiles();
  links_.resize(tiles);
  for (TileId t = 0; t < tiles; ++t) {
    for (std::uint32_t p = 0; p < 4; ++p) {
      Link& l = links_[t][p];
      l.valid = neighbor(t, static_cast<Port>(p), l.next, l.wrap);
      l.boundary = l.valid && crosses_chip(geom_.coord(t), geom_.coord(l.next));
    }
  }
  buffers_.resize(tiles * slots_per_router_);
  for (auto& b : buffers_) b.queue = RingQueue<Message>(config_.buffer_flits);
  nonempty_.assign(tiles, 0);
  busy_until_.assign(tiles, {});
  rr_last_.assign(tiles, {});
  for (auto& r : rr_last_) r.fill(static_cast<std::uint32_t>(slots_per_router_ - 1));
  router_busy_until_.assign(tiles, 0);
  active_bits_.assign((tiles + 63) / 64, 0);
  active_at_.assign(tiles, ~Cycle{0});
  router_active_cycles_.assign(tiles, 0);
}

std::uint64_t Network::capacity_flits() const {
  return static_cast<std::uint64_t>(buffers_.size()) * config_.buffer_flits;
}

bool Network::can_inject(TileId tile, const Message& msg) const {
  const auto& b = buffer(tile, slot_index(Port::kLocal, msg.channel, 0));
  return b.flits + msg.size_flits() <= config_.buffer_flits;
}

void Network::inject(TileId tile, Message msg) {
  if (!can_inject(tile, msg)) throw SimulationFault("inject into a full local router buffer");
  msg.src = tile;
  msg.vc = 0;
  msg.dim = 0;
  msg.hops = 0;
  msg.ready = now_;
  msg.injected_at = now_;
  ++counters_.injected;
  push(tile, slot_index(Port::kLocal, msg.channel, 0), msg);
}

void Network::push(TileId tile, std::size_t slot, Message msg) {
  Buffer& b = buffer(tile, slot);
  touch(b);
  b.flits += msg.size_flits();
  buffered_flits_ += msg.size_flits();
  b.queue.push_back(msg);
  if (b.queue.size() == 1) set_head(b);
  nonempty_[tile] |= std::uint64_t{1} << slot;
  active_bits_[tile / 64] |= std::uint64_t{1} << (tile % 64);
}

Message Network::pop(TileId tile, std::size_t slot) {
  Buffer& b = buffer(tile, slot);
  touch(b);
  Message msg = b.queue.pop_front();
  b.flits -= msg.size_flits();
  buffered_flits_ -= msg.size_flits();
  if (b.queue.empty()) {
    nonempty_[tile] &= ~(std::uint64_t{1} << slot);
    b.routed = false;
  } else {
    set_head(b);
  }
  return msg;
}

void Network::set_head(Buffer& b) {
  const Message& head = b.queue.front();
  b.head_ready = head.ready;
  b.head_size = head.size_flits();
  b.routed = false;
}

bool Network::neighbor(TileId tile, Port out, TileId& next, bool& wrap) const {
  const Coord c = geom_.coord(tile);
  const std::uint32_t w = geom_.width();
  const std::uint32_t h = geom_.height();
  const bool torus = config_.topology != Topology::kMesh;
  Coord n = c;
  wrap = false;
  switch (out) {
    case Port::kEast:
      wrap = c.x == w - 1;
      n.x = wrap ? 0 : c.x + 1;
      break;
    case Port::kWest:
      wrap = c.x == 0;
      n.x = wrap ? w - 1 : c.x - 1;
      break;
    case Port::kSouth:
      wrap = c.y == h - 1;
      n.y = wrap ? 0 : c.y + 1;
      break;
    case Port::kNorth:
      wrap = c.y == 0;
      n.y = wrap ? h - 1 : c.y - 1;
      break;
    case Port::kLocal:
      return false;
  }
  if (wrap && !torus) return false;
  next = geom_.id(n);
  return true;
}

bool Network::crosses_chip(Coord a, Coord b) const {
  if (config_.topology != Topology::kMultichipTorus) return false;
  const std::uint32_t pane = config_.chip_pane;
  return a.x / pane != b.x / pane || a.y / pane != b.y / pane;
}

bool Network::opposite_port_full(TileId tile, Port in, const Message& msg) const {
  const Port out = opposite(in);
  const Link& l = links_[tile][static_cast<std::size_t>(out)];
  if (!l.valid) return false;
  const std::uint8_t vc = l.wrap && num_vcs_ > 1 ? 1 : msg.vc;
  const Buffer& b = buffer(l.next, slot_index(opposite(out), msg.channel, vc));
  return config_.buffer_flits - registered_flits(b) < kMaxMessageFlits;
}

bool Network::capture_eligible(TileId tile, Port in, const Message& msg) const {
  if (config_.cascade == CascadeMode::kNone || msg.channel != config_.capturable_channel) return false;
  if (in == Port::kLocal || tile == msg.dest) return false;
  return geom_.intra_region(geom_.coord(tile)) == geom_.intra_region(geom_.coord(msg.dest));
}

void Network::resolve(TileId tile, Port in, const Message& msg, DeliverySink& sink, Target& t) const {
  t = Target{};
  t.channel = msg.channel;
  if (tile == msg.dest) {
    t.out = Port::kLocal;
    return;
  }
  if (config_.cascade != CascadeMode::kNone && msg.channel == config_.capturable_channel && in != Port::kLocal) {
    const auto signals = capture_signals(geom_.coord(tile), geom_.coord(msg.dest), geom_,
                                         sink.iq_below_half(tile, config_.proxy_channel),
                                         opposite_port_full(tile, in, msg));
    if (capture_decision(signals, config_.cascade) == CaptureDecision::kCaptureAsProxy) {
      if (sink.can_accept(tile, config_.proxy_channel)) {
        t.out = Port::kLocal;
        t.channel = config_.proxy_channel;
        t.captured = true;
        return;
      }
      t.declined = true;
    }
  }
  t.out = route_step(geom_.coord(tile), geom_.coord(msg.dest), config_.topology, geom_);
  const Link& l = links_[tile][static_cast<std::size_t>(t.out)];
  if (!l.valid) throw SimulationFault("route leaves the grid");
  t.next = l.next;
  t.wrap = l.wrap;
  t.boundary = l.boundary;
  const std::uint8_t dim = (t.out == Port::kEast || t.out == Port::kWest) ? 1 : 2;
  t.vc = dim == msg.dim ? msg.vc : 0;
  if (t.wrap && num_vcs_ > 1) t.vc = 1;  // dateline
}

bool Network::can_move(TileId tile, const Target& t, std::uint32_t size, DeliverySink& sink) const {
  if (t.out == Port::kLocal) return t.captured || sink.can_accept(tile, t.channel);
  const Buffer& down = buffer(t.next, slot_index(opposite(t.out), t.channel, t.vc));
  return down.flits + size <= config_.buffer_flits;
}

void Network::step_router(TileId tile, DeliverySink& sink) {
  std::array<int, kNumPorts> best{-1, -1, -1, -1, -1};
  std::array<std::uint32_t, kNumPorts> best_rank{};
  std::array<Target, kNumPorts> best_target{};
  const auto& busy = busy_until_[tile];
  const auto slots = static_cast<std::uint32_t>(slots_per_router_);
  const std::uint32_t per_port = config_.num_channels * num_vcs_;

  for (std::uint64_t mask = nonempty_[tile]; mask != 0; mask &= mask - 1) {
    const auto slot = static_cast<std::uint32_t>(std::countr_zero(mask));
    Buffer& b = buffer(tile, slot);
    if (b.head_ready > now_) continue;
    Target t;
    if (b.routed) {
      t = b.route;
    } else {
      const auto in = static_cast<Port>(slot / per_port);
      const Message& head = b.queue.front();
      resolve(tile, in, head, sink, t);
      if (!capture_eligible(tile, in, head)) {
        b.route = t;
        b.routed = true;
      }
    }
    const auto o = static_cast<std::size_t>(t.out);
    if (busy[o] > now_) continue;
    if (!can_move(tile, t, b.head_size, sink)) continue;
    const std::uint32_t rank = (slot + slots - rr_last_[tile][o] - 1) % slots;
    if (best[o] < 0 || rank < best_rank[o]) {
      best[o] = static_cast<int>(slot);
      best_rank[o] = rank;
      best_target[o] = t;
    }
  }

  for (std::size_t o = 0; o < kNumPorts; ++o) {
    if (best[o] < 0) continue;
    const auto slot = static_cast<std::uint32_t>(best[o]);
    const Target& t = best_target[o];
    rr_last_[tile][o] = slot;
    Message msg = pop(tile, slot);
    const std::uint32_t size = msg.size_flits();
    busy_until_[tile][o] = now_ + size;
    router_busy_until_[tile] = std::max(router_busy_until_[tile], now_ + size);
    max_busy_until_ = std::max(max_busy_until_, now_ + size);
    if (t.out == Port::kLocal) {
      if (t.captured) {
        ++counters_.captured;
      } else {
        ++counters_.delivered;
        counters_.delivered_hops += msg.hops;
      }
      sink.accept(tile, t.channel, msg, t.captured);
      continue;
    }
    if (t.declined) ++counters_.captures_declined_full;
    msg.dim = (t.out == Port::kEast || t.out == Port::kWest) ? 1 : 2;
    msg.vc = t.vc;
    ++msg.hops;
    msg.ready = now_ + config_.link_latency + (t.boundary ? config_.boundary_latency : 0) + config_.router_delay;
    counters_.flit_hops += size;
    if (t.boundary) counters_.boundary_flit_hops += size;
    push(t.next, slot_index(opposite(t.out), t.channel, t.vc), msg);
  }
}

std::uint64_t Network::advance_cycle(DeliverySink& sink) {
  std::uint64_t moved = 0;
  active_list_.clear();
  for (std::size_t word = 0; word < active_bits_.size(); ++word) {
    for (std::uint64_t bits = active_bits_[word]; bits != 0; bits &= bits - 1) {
      const auto tile = static_cast<TileId>(word * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      if (nonempty_[tile] != 0) step_router(tile, sink);
      if (router_busy_until_[tile] > now_) {
        active_at_[tile] = now_;
        active_list_.push_back(tile);
        ++router_active_cycles_[tile];
        for (const Cycle until : busy_until_[tile]) moved += until > now_ ? 1 : 0;
      }
      if (nonempty_[tile] == 0 && router_busy_until_[tile] <= now_ + 1) {
        active_bits_[word] &= ~(std::uint64_t{1} << (tile % 64));
      }
    }
  }
  ++now_;
  return moved;
}

void Network::skip_to(Cycle cycle) {
  if (!idle()) throw SimulationFault("cannot skip time with traffic in the network");
  if (cycle > now_) now_ = cycle;
}

}  // namespace tascade
