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

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace tascade;

TEST_SUITE("simulator") {

TEST_CASE("mode names round trip") {
  for (Mode m : kAllModes) CHECK(parse_mode(to_string(m)) == m);
  CHECK_THROWS_AS(parse_mode("dalorex"), std::invalid_argument);
  CHECK_FALSE(mode_traits(Mode::kNoProxy).proxies);
  CHECK(mode_traits(Mode::kTascadeSelective).cascade == CascadeMode::kSelective);
  CHECK(mode_traits(Mode::kSyncCascade).sync);
}

TEST_CASE("fresh grid without seeded work is quiescent") {
  Workload w = Workload::histogram({}, 4);
  Simulator sim(fixture::sim_config(4, 2, Mode::kTascadeSelective, 2), w);
  CHECK(sim.quiescent());
  sim.run();
  CHECK(sim.quiescent());
  CHECK(sim.ledger().global.flit_hops == 0);
}

TEST_CASE("an in-flight message breaks quiescence") {
  Workload w(WorkloadKind::kBfs, fixture::ring(16), {});
  Simulator sim(fixture::sim_config(4, 2, Mode::kNoProxy, 1), w);
  bool saw_flight = false;
  while (sim.step()) {
    if (sim.network().in_flight() > 0) {
      saw_flight = true;
      CHECK_FALSE(sim.quiescent());
      break;
    }
  }
  CHECK(saw_flight);
}

TEST_CASE("an unflushed dirty P-cache line breaks quiescence") {
  // With 1-wide regions every tile is its own proxy, so each update lands in
  // the local write-back P-cache first.
  Workload w = Workload::histogram({0, 0, 0, 1, 1, 1, 2, 2, 3, 3, 0, 1}, 4);
  Simulator sim(fixture::sim_config(2, 1, Mode::kProxyMergeOwner, 4), w);
  bool saw_dirty = false;
  while (sim.step()) {
    for (const auto& t : sim.tiles()) {
      if (t.pcache && !t.pcache->clean()) {
        saw_dirty = true;
        CHECK_FALSE(sim.quiescent());
      }
    }
  }
  CHECK(saw_dirty);
  CHECK(sim.quiescent());
  CHECK(std::vector<Word>(w.result().begin(), w.result().end()) == std::vector<Word>{4, 4, 2, 2});
}

TEST_CASE("update tokens are conserved every cycle") {
  const CsrGraph g = generate_rmat(9, 8, 5);
  for (Mode mode : {Mode::kNoProxy, Mode::kProxyAlwaysCascade, Mode::kTascadeSelective}) {
    CAPTURE(to_string(mode));
    Workload w(WorkloadKind::kBfs, g, {});
    Simulator sim(fixture::sim_config(8, 4, mode, 16), w);
    std::uint64_t violations = 0;
    sim.set_observer([&](const Simulator& s) {
      if (s.updates_issued() != s.updates_in_transit() + s.pcache_filtered() + s.owner_updates()) ++violations;
      std::uint64_t buffered = 0;
      s.network().for_each_message([&](const Message&) { ++buffered; });
      const auto& c = s.network().counters();
      if (c.injected != c.delivered + c.captured + buffered) ++violations;
    });
    sim.run();
    CHECK(violations == 0);
    CHECK(sim.network().in_flight() == 0);
    CHECK(sim.quiescent());
  }
}

TEST_CASE("write-through is rejected for additive reductions") {
  Workload w = Workload::histogram({1, 2}, 4);
  auto cfg = fixture::sim_config(2, 1, Mode::kTascadeSelective, 2);
  cfg.policy = WritePolicy::kWriteThrough;
  CHECK_THROWS_AS(Simulator(cfg, w), std::invalid_argument);
}

TEST_CASE("configuration validation") {
  Workload w(WorkloadKind::kSssp, fixture::path(), {});
  auto cfg = fixture::sim_config(4, 2, Mode::kTascadeSelective, 3);
  CHECK_THROWS_AS(Simulator(cfg, w), std::invalid_argument);
  cfg.pcache_capacity = 2;
  cfg.oq_capacity = 1;
  CHECK_THROWS_AS(Simulator(cfg, w), std::invalid_argument);
  cfg.oq_capacity = 32;
  cfg.iq_capacity = 1;
  CHECK_THROWS_AS(Simulator(cfg, w), std::invalid_argument);
}

TEST_CASE("sync modes insert barriers and still match the oracle") {
  const CsrGraph g = generate_rmat(8, 8, 6);
  for (Mode mode : {Mode::kSyncMerge, Mode::kSyncCascade}) {
    Workload w(WorkloadKind::kSssp, g, {});
    Simulator sim(fixture::sim_config(4, 2, mode, 8), w);
    sim.run();
    CHECK(sim.ledger().global.barriers > 0);
    CHECK(sim.policy() == WritePolicy::kWriteBack);
    CHECK(std::vector<Word>(w.result().begin(), w.result().end()) == oracle::expected(w));
  }
}

TEST_CASE("runs are deterministic") {
  const CsrGraph g = generate_rmat(9, 8, 7);
  auto once = [&] {
    Workload w(WorkloadKind::kSssp, g, {});
    Simulator sim(fixture::sim_config(8, 4, Mode::kTascadeSelective, 16), w);
    sim.run();
    const auto l = sim.ledger();
    return std::tuple(l.global.total_cycles, l.global.flit_hops, l.global.messages_captured,
                      std::vector<Word>(w.result().begin(), w.result().end()));
  };
  CHECK(once() == once());
}

TEST_CASE("activity timeline spans the run") {
  Workload w(WorkloadKind::kBfs, generate_rmat(8, 8, 1), {});
  auto cfg = fixture::sim_config(4, 2, Mode::kTascadeSelective, 4);
  cfg.activity_window = 50;
  Simulator sim(cfg, w);
  sim.run();
  const auto l = sim.ledger();
  CHECK(l.timeline.enabled());
  CHECK(l.timeline.num_windows() == (l.global.total_cycles + 49) / 50);
  std::uint64_t pu = 0;
  for (std::size_t i = 0; i < l.timeline.num_windows(); ++i) {
    for (auto v : l.timeline.pu_window(i)) pu += v;
  }
  std::uint64_t pu_ledger = 0;
  for (const auto& t : l.tiles) pu_ledger += t.pu_active_cycles;
  CHECK(pu == pu_ledger);
}

TEST_CASE("per-tile proxy footprint") {
  const std::uint64_t len = 1 << 14;
  std::vector<std::uint64_t> input(len);
  for (std::uint64_t i = 0; i < len; ++i) input[i] = i;
  for (std::uint32_t wdt : {4u, 8u, 16u}) {
    Workload w = Workload::histogram(input, len);
    Simulator sim(fixture::sim_config(32, wdt, Mode::kProxyMergeOwner, 1), w);
    for (const auto& t : sim.tiles()) {
      REQUIRE(t.pcache.has_value());
      CHECK(t.pcache->config().local_fraction_len == len / (wdt * wdt));
    }
  }
}

}  // TEST_SUITE
