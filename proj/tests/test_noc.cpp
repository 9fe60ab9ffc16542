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

#include <doctest.h>

#include <map>
#include <random>

#include "tascade/noc.hpp"

using namespace tascade;

namespace {

struct Sink : DeliverySink {
  const Network* net = nullptr;
  std::vector<std::pair<Cycle, Message>> got;
  bool accept_all = true;
  bool can_accept(TileId, std::uint8_t) const override { return accept_all; }
  void accept(TileId, std::uint8_t, const Message& m, bool) override { got.push_back({net->now(), m}); }
  bool iq_below_half(TileId, std::uint8_t) const override { return true; }
};

Message msg(const GridGeometry& g, Coord src, Coord dst, std::uint8_t channel = kEdge, std::uint8_t words = 0) {
  Message m;
  m.src = g.id(src);
  m.dest = g.id(dst);
  m.channel = channel;
  m.payload_words = words;
  return m;
}

Cycle run_until_delivered(Network& net, Sink& sink, std::size_t count, Cycle limit = 10000) {
  Cycle cycles = 0;
  while (sink.got.size() < count && cycles < limit) {
    net.advance_cycle(sink);
    ++cycles;
  }
  return cycles;
}

}  // namespace

TEST_SUITE("noc") {

TEST_CASE("dimension-ordered route step") {
  const GridGeometry g(8, 8, 4);
  CHECK(route_step({3, 2}, {7, 2}, Topology::kMesh, g) == Port::kEast);
  CHECK(route_step({1, 0}, {7, 0}, Topology::kTorus, g) == Port::kWest);
  CHECK(route_step({1, 0}, {7, 0}, Topology::kMesh, g) == Port::kEast);
  CHECK(route_step({4, 4}, {4, 4}, Topology::kTorus, g) == Port::kLocal);
  // X before Y.
  CHECK(route_step({0, 0}, {1, 5}, Topology::kMesh, g) == Port::kEast);
  CHECK(route_step({1, 0}, {1, 5}, Topology::kMesh, g) == Port::kSouth);
  // Ties on a torus go the positive way.
  CHECK(route_step({0, 0}, {4, 0}, Topology::kTorus, g) == Port::kEast);
}

TEST_CASE("capture decision examples") {
  CaptureSignals s;
  s.is_dest = true;
  for (auto m : {CascadeMode::kNone, CascadeMode::kAlways, CascadeMode::kSelective}) {
    CHECK(capture_decision(s, m) == CaptureDecision::kDeliverLocal);
  }
  s = {false, true, true, true, false};  // IQ 3/8
  CHECK(capture_decision(s, CascadeMode::kSelective) == CaptureDecision::kCaptureAsProxy);
  s.iq_below_half = false;  // IQ 7/8, port ahead free
  CHECK(capture_decision(s, CascadeMode::kSelective) == CaptureDecision::kForward);
  CHECK(capture_decision(s, CascadeMode::kAlways) == CaptureDecision::kCaptureAsProxy);
  s.opposite_port_full = true;
  CHECK(capture_decision(s, CascadeMode::kSelective) == CaptureDecision::kCaptureAsProxy);
  CHECK(capture_decision(s, CascadeMode::kNone) == CaptureDecision::kForward);
  s = {false, true, false, true, true};
  CHECK(capture_decision(s, CascadeMode::kAlways) == CaptureDecision::kForward);
}

TEST_CASE("single message latency is two cycles per hop") {
  const GridGeometry g(8, 8, 4);
  NetworkConfig cfg;
  cfg.topology = Topology::kMesh;
  Network net(g, cfg);
  Sink sink;
  sink.net = &net;
  net.inject(g.id({0, 0}), msg(g, {0, 0}, {3, 2}));
  run_until_delivered(net, sink, 1);
  REQUIRE(sink.got.size() == 1);
  CHECK(sink.got[0].second.hops == 5);
  const Cycle c = sink.got[0].first;
  // Five links of 1 cycle plus five router traversals of 1 cycle.
  CHECK(c == 10);
  CHECK(net.counters().flit_hops == 5);
  CHECK(net.idle());
}

TEST_CASE("two messages contending for one output port") {
  const GridGeometry g(8, 8, 4);
  NetworkConfig cfg;
  cfg.topology = Topology::kMesh;
  Cycle solo = 0;
  {
    Network net(g, cfg);
    Sink sink;
    sink.net = &net;
    net.inject(g.id({0, 0}), msg(g, {0, 0}, {2, 0}, kEdge));
    run_until_delivered(net, sink, 1);
    solo = sink.got.at(0).first;
  }
  Network net(g, cfg);
  Sink sink;
  sink.net = &net;
  net.inject(g.id({0, 0}), msg(g, {0, 0}, {2, 0}, kEdge));
  net.inject(g.id({0, 0}), msg(g, {0, 0}, {2, 0}, kReduce));
  run_until_delivered(net, sink, 2);
  REQUIRE(sink.got.size() == 2);
  const Cycle first = sink.got[0].first;
  const Cycle second = sink.got[1].first;
  CHECK(first == solo);
  CHECK(second == first + 1);
}

TEST_CASE("multi-flit message holds the port for its length") {
  const GridGeometry g(8, 8, 4);
  NetworkConfig cfg;
  cfg.topology = Topology::kMesh;
  Network net(g, cfg);
  Sink sink;
  sink.net = &net;
  net.inject(g.id({0, 0}), msg(g, {0, 0}, {2, 0}, kEdge, 2));
  net.inject(g.id({0, 0}), msg(g, {0, 0}, {2, 0}, kReduce, 0));
  run_until_delivered(net, sink, 2);
  REQUIRE(sink.got.size() == 2);
  CHECK(sink.got[1].first >= sink.got[0].first + 1);
  CHECK(net.counters().flit_hops == 2 * 3 + 2 * 1);
}

TEST_CASE("zero messages move zero flits") {
  const GridGeometry g(4, 4, 2);
  Network net(g, {});
  Sink sink;
  sink.net = &net;
  for (int i = 0; i < 10; ++i) CHECK(net.advance_cycle(sink) == 0);
  CHECK(net.counters().flit_hops == 0);
  CHECK(net.idle());
}

TEST_CASE("injection backpressure and per-channel independence") {
  const GridGeometry g(4, 4, 2);
  NetworkConfig cfg;
  cfg.buffer_flits = 3;
  Network net(g, cfg);
  const Message a = msg(g, {0, 0}, {1, 1}, kEdge, 2);
  CHECK(net.can_inject(0, a));
  net.inject(0, a);
  CHECK_FALSE(net.can_inject(0, a));
  CHECK_THROWS(net.inject(0, a));
  // A different channel has its own buffer.
  const Message b = msg(g, {0, 0}, {1, 1}, kReduce, 2);
  CHECK(net.can_inject(0, b));
  net.inject(0, b);
  CHECK(net.counters().injected == 2);
}

TEST_CASE("ejection backpressure stalls delivery") {
  const GridGeometry g(4, 4, 2);
  Network net(g, {});
  Sink sink;
  sink.net = &net;
  sink.accept_all = false;
  net.inject(0, msg(g, {0, 0}, {1, 0}));
  for (int i = 0; i < 20; ++i) net.advance_cycle(sink);
  CHECK(sink.got.empty());
  CHECK(net.in_flight() == 1);
  sink.accept_all = true;
  run_until_delivered(net, sink, 1);
  CHECK(sink.got.size() == 1);
}

TEST_CASE("hop count equals wrapped Manhattan distance") {
  for (auto topo : {Topology::kMesh, Topology::kTorus}) {
    const GridGeometry g(16, 16, 4);
    Network net(g, NetworkConfig{.topology = topo});
    Sink sink;
    sink.net = &net;
    std::mt19937_64 rng(42);
    for (int i = 0; i < 200; ++i) {
      const Coord s{std::uint32_t(rng() % 16), std::uint32_t(rng() % 16)};
      const Coord d{std::uint32_t(rng() % 16), std::uint32_t(rng() % 16)};
      Message m = msg(g, s, d);
      m.index = std::uint64_t(i);
      while (!net.can_inject(g.id(s), m)) net.advance_cycle(sink);
      net.inject(g.id(s), m);
      const std::size_t before = sink.got.size();
      run_until_delivered(net, sink, before + 1);
      REQUIRE(sink.got.size() == before + 1);
      const auto dx = std::abs(int(s.x) - int(d.x));
      const auto dy = std::abs(int(s.y) - int(d.y));
      const auto want = topo == Topology::kMesh ? dx + dy : std::min(dx, 16 - dx) + std::min(dy, 16 - dy);
      CHECK(sink.got.back().second.hops == std::uint32_t(want));
      CHECK(route_distance(s, d, topo, g) == std::uint32_t(want));
    }
  }
}

TEST_CASE("chip boundary crossings add latency and are counted") {
  const GridGeometry g(64, 64, 16);
  NetworkConfig cfg;
  cfg.topology = Topology::kMultichipTorus;
  cfg.chip_pane = 32;
  cfg.boundary_latency = 20;
  Network net(g, cfg);
  Sink sink;
  sink.net = &net;
  net.inject(g.id({30, 0}), msg(g, {30, 0}, {33, 0}));
  run_until_delivered(net, sink, 1);
  REQUIRE(sink.got.size() == 1);
  const Cycle c = sink.got[0].first;
  CHECK(net.counters().boundary_flit_hops == 1);
  CHECK(c == 3 * 2 + 20);
}

TEST_CASE("network rejects degenerate configurations") {
  const GridGeometry g(4, 4, 2);
  NetworkConfig cfg;
  cfg.buffer_flits = 2;
  CHECK_THROWS_AS(Network(g, cfg), std::invalid_argument);
  cfg.buffer_flits = 8;
  cfg.link_latency = 0;
  cfg.router_delay = 0;
  CHECK_THROWS_AS(Network(g, cfg), std::invalid_argument);
}

}  // TEST_SUITE
