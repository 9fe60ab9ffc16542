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

#include "tascade/simulator.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tascade {

namespace {

constexpr std::string_view kModeNames[] = {"no_proxy",         "proxy_merge_owner", "proxy_always_cascade",
                                           "tascade_selective", "sync_merge",        "sync_cascade"};

bool is_update_channel(std::uint8_t ch) { return ch == kReduce || ch == kProxy; }

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::kAsync: return "async";
    case Phase::kCompute: return "compute";
    case Phase::kMerge: return "merge";
    case Phase::kDone: return "done";
  }
  return "?";
}

}  // namespace

Mode parse_mode(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kModeNames); ++i) {
    if (name == kModeNames[i]) return static_cast<Mode>(i);
  }
  throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

std::string_view to_string(Mode m) { return kModeNames[static_cast<std::size_t>(m)]; }

ModeTraits mode_traits(Mode m) {
  switch (m) {
    case Mode::kNoProxy: return {false, CascadeMode::kNone, false};
    case Mode::kProxyMergeOwner: return {true, CascadeMode::kNone, false};
    case Mode::kProxyAlwaysCascade: return {true, CascadeMode::kAlways, false};
    case Mode::kTascadeSelective: return {true, CascadeMode::kSelective, false};
    case Mode::kSyncMerge: return {true, CascadeMode::kNone, true};
    case Mode::kSyncCascade: return {true, CascadeMode::kAlways, true};
  }
  return {};
}

namespace {

NetworkConfig network_config(const SimConfig& c) {
  NetworkConfig n = c.network;
  n.cascade = mode_traits(c.mode).cascade;
  n.num_channels = kNumChannels;
  n.capturable_channel = kReduce;
  n.proxy_channel = kProxy;
  return n;
}

}  // namespace

Simulator::Simulator(const SimConfig& config, Workload& workload)
    : config_(config),
      workload_(workload),
      geom_(config.width, config.height, config.region_width),
      traits_(mode_traits(config.mode)),
      network_(geom_, network_config(config)),
      policy_(traits_.sync ? WritePolicy::kWriteBack : config.policy.value_or(workload.natural_policy())) {
  if (workload_.reduce_op().kind == ReduceOp::Kind::kAdd && policy_ == WritePolicy::kWriteThrough) {
    throw std::invalid_argument("write-through proxies need an idempotent reduction; use write_back");
  }
  if (config_.iq_capacity < 2) throw std::invalid_argument("iq_capacity must be at least 2");
  if (traits_.proxies && !is_pow2(config_.pcache_capacity)) {
    throw std::invalid_argument("pcache_capacity must be a power of two");
  }
  if (config_.barrier_latency == 0) config_.barrier_latency = config_.width + config_.height;

  const std::uint64_t num_tiles = geom_.num_tiles();
  vertex_part_ = partition(workload_.reduction_length(), num_tiles);
  edge_part_ = partition(workload_.edge_array_length(), num_tiles);
  frontier_part_ = workload_.kind() == WorkloadKind::kHistogram ? edge_part_ : vertex_part_;
  workload_.set_partitions(vertex_part_, edge_part_);

  tasks_ = workload_.tasks(traits_.proxies);
  for (const auto& task : tasks_) {
    for (std::uint32_t ch = 0; ch < kNumChannels; ++ch) {
      const std::uint32_t need = task.max_emissions[ch] + (task.may_touch_pcache && ch == kReduce ? 1 : 0);
      if (need > config_.oq_capacity) {
        throw std::invalid_argument("oq_capacity " + std::to_string(config_.oq_capacity) +
                                    " cannot hold a task's worst-case " + std::to_string(need) + " emissions");
      }
    }
  }

  tiles_.reserve(num_tiles);
  for (TileId id = 0; id < num_tiles; ++id) {
    TileState& t = tiles_.emplace_back(id, geom_.coord(id), config_.iq_capacity, config_.oq_capacity);
    t.frontier = Frontier(frontier_part_.chunk_begin(id), frontier_part_.chunk_length(id));
    if (!traits_.proxies) continue;
    ProxyAddressMap map(vertex_part_, geom_, t.coord);
    ProxyCacheConfig pc;
    pc.local_fraction_base = 0;
    pc.local_fraction_len = map.fraction_length();
    pc.capacity = std::min(config_.pcache_capacity, next_pow2(std::max<std::uint64_t>(pc.local_fraction_len, 1)));
    pc.policy = policy_;
    pc.propagate_channel = kReduce;
    pc.default_value = workload_.identity();
    t.pcache.emplace(pc, map, workload_.reduce_op());
  }
  if (config_.activity_window > 0) timeline_ = ActivityTimeline(config_.width, config_.height, config_.activity_window);

  active_tiles_.assign((num_tiles + 63) / 64, 0);
  phase_ = traits_.sync ? Phase::kCompute : Phase::kAsync;
  frontier_enabled_ = true;
  flush_enabled_ = !traits_.sync;
  start_epoch();
}

void Simulator::mark_all_active() {
  for (TileId id = 0; id < tiles_.size(); ++id) mark_active(id);
}

bool Simulator::tile_idle(const TileState& t) const {
  if (!t.pu.idle() || !t.oqs_empty()) return false;
  if (!t.iqs[kEdge].empty() || !t.iqs[kReduce].empty() || !t.iqs[kProxy].empty()) return false;
  if (frontier_enabled_ && !t.frontier.empty()) return false;
  return !(flush_enabled_ && t.pcache && policy_ == WritePolicy::kWriteBack && !t.pcache->clean());
}

void Simulator::seed(std::uint64_t index) {
  const auto owner = static_cast<TileId>(frontier_part_.owner(index));
  if (tiles_[owner].frontier.push(index)) ++frontier_total_;
  mark_active(owner);
}

void Simulator::start_epoch() {
  workload_.begin_epoch(epoch_, [this](std::uint64_t i) { seed(i); });
}

TileId Simulator::vertex_owner(std::uint64_t index) const {
  if (index >= vertex_part_.array_len) {
    throw SimulationFault("reduction index " + std::to_string(index) + " out of range");
  }
  return static_cast<TileId>(vertex_part_.owner(index));
}

Message Simulator::make_message(std::uint8_t channel, std::uint64_t index, TileId dest, std::uint8_t words,
                                std::uint64_t p0, std::uint64_t p1) const {
  Message m;
  m.index = index;
  m.payload = {p0, p1};
  m.channel = channel;
  m.payload_words = words;
  m.dest = dest;
  m.src = current_;
  return m;
}

bool Simulator::can_accept(TileId tile, std::uint8_t channel) const { return !tiles_[tile].iqs[channel].full(); }

void Simulator::accept(TileId tile, std::uint8_t channel, const Message& msg, bool) {
  TileState& t = tiles_[tile];
  t.iqs[channel].push_back(msg.invocation(), cycle_);
  mark_active(tile);
  const std::uint64_t occupancy = t.iq_total() - t.frontier.size();
  t.counters.iq_peak = std::max(t.counters.iq_peak, occupancy);
}

bool Simulator::iq_below_half(TileId tile, std::uint8_t channel) const {
  const InputQueue& q = tiles_[tile].iqs[channel];
  return q.registered_size(cycle_) * 2 < q.capacity();
}

void Simulator::emit_edge_task(std::uint64_t begin, std::uint64_t end, Word value) {
  if (begin >= edge_part_.array_len) throw SimulationFault("edge task past the edge array");
  const auto dest = static_cast<TileId>(edge_part_.owner(begin));
  tiles_[current_].pu.pending.push_back(make_message(kEdge, begin, dest, 2, end, value));
}

void Simulator::emit_reduce(std::uint64_t index, Word value) {
  ++updates_issued_;
  const TileId owner = vertex_owner(index);
  std::uint8_t channel = kReduce;
  TileId dest = owner;
  if (traits_.proxies) {
    const TileId proxy = geom_.id(proxy_tile(geom_.coord(owner), geom_.coord(current_), geom_));
    // Sources inside the owner's region have the owner itself as proxy.
    if (proxy != owner) {
      channel = kProxy;
      dest = proxy;
    }
  }
  tiles_[current_].pu.pending.push_back(make_message(channel, index, dest, 1, value));
}

void Simulator::requeue(const Invocation& inv) {
  InputQueue& q = tiles_[current_].iqs[current_channel_];
  if (current_channel_ == kFrontier || q.full()) throw SimulationFault("requeue without queue space");
  q.push_front(inv, cycle_);
}

void Simulator::push_frontier(std::uint64_t index) {
  if (tiles_[current_].frontier.push(index)) {
    ++frontier_pushes_;
    ++frontier_total_;
  }
}

void Simulator::require_owned(const Partition& part, std::uint64_t index) const {
  if (index >= part.array_len || part.owner(index) != current_) {
    throw SimulationFault("tile " + std::to_string(current_) + " touched non-owned index " + std::to_string(index));
  }
}

void Simulator::touch_sram(std::uint32_t bytes) { sram_bytes_ += bytes; }

void Simulator::proxy_update(TileState& t, const Invocation& inv) {
  if (!t.pcache) throw SimulationFault("proxy task on a tile without a P-cache");
  ++pcache_attempts_;
  sram_bytes_ += 4;
  const std::size_t dirty_before = t.pcache->dirty_lines();
  const auto res = t.pcache->update(inv.index, static_cast<Word>(inv.payload[0]));
  dirty_total_ = dirty_total_ + t.pcache->dirty_lines() - dirty_before;
  if (res.emission) {
    ++pcache_emissions_;
    t.pu.pending.push_back(make_message(kReduce, res.emission->global_index,
                                        vertex_owner(res.emission->global_index), 1, res.emission->value));
  }
}

void Simulator::execute(TileState& t, std::uint8_t channel) {
  current_ = t.id;
  current_channel_ = channel;
  frontier_pushes_ = 0;
  sram_bytes_ = 0;
  t.pu.pending.clear();
  switch (channel) {
    case kFrontier:
      --frontier_total_;
      workload_.frontier_task(*this, t.frontier.pop());
      break;
    case kEdge:
      workload_.edge_task(*this, t.iqs[kEdge].pop_front(cycle_));
      break;
    case kReduce: {
      const Invocation inv = t.iqs[kReduce].pop_front(cycle_);
      if (workload_.owner_reduce(*this, inv.index, static_cast<Word>(inv.payload[0]))) {
        ++owner_applied_;
      } else {
        ++owner_rejected_;
      }
      break;
    }
    case kProxy:
      proxy_update(t, t.iqs[kProxy].pop_front(cycle_));
      break;
    default:
      throw SimulationFault("no task bound to channel " + std::to_string(channel));
  }
  t.pu.channel = channel;
  t.pu.remaining = config_.task_cost[channel] + static_cast<std::uint32_t>(t.pu.pending.size()) + frontier_pushes_;
  ++t.counters.tasks_executed;
  ++t.counters.tasks_by_channel[channel];
  t.counters.sram_bytes += sram_bytes_;
  ++tasks_executed_;
}

void Simulator::step_tile(TileState& t) {
  bool pu_active = false;
  if (t.pu.idle()) {
    if (auto ch = tsu_select(t, tasks_, frontier_enabled_)) {
      execute(t, *ch);
      last_progress_ = cycle_;
    } else if (flush_enabled_ && t.pcache && policy_ == WritePolicy::kWriteBack && t.oqs_empty()) {
      if (auto wb = t.pcache->idle_flush()) {
        --dirty_total_;
        current_ = t.id;
        ++pcache_emissions_;
        t.oqs[kReduce].push_back(make_message(kReduce, wb->global_index, vertex_owner(wb->global_index), 1, wb->value));
        last_progress_ = cycle_;
      }
    }
  }
  if (!t.pu.idle()) {
    pu_active = true;
    ++t.counters.pu_active_cycles;
    if (--t.pu.remaining == 0) {
      for (const Message& m : t.pu.pending) {
        if (t.oqs[m.channel].full()) throw SimulationFault("output queue overflow on commit");
        t.oqs[m.channel].push_back(m);
      }
      t.pu.pending.clear();
    }
  }
  for (auto& oq : t.oqs) {
    if (!oq.empty() && network_.can_inject(t.id, oq.front())) {
      network_.inject(t.id, oq.pop_front());
      last_progress_ = cycle_;
    }
  }

  if (pu_active) timeline_.record(t.id, cycle_, true, false);
  if (!t.pu.idle() || !t.oqs_empty() || !t.iqs[kEdge].empty() || !t.iqs[kReduce].empty() || !t.iqs[kProxy].empty()) {
    tiles_idle_ = false;
  }
}

bool Simulator::phase_complete() const {
  if (!tiles_idle_ || !network_.idle()) return false;
  switch (phase_) {
    case Phase::kAsync: return frontier_total_ == 0 && dirty_total_ == 0;
    case Phase::kCompute: return frontier_total_ == 0;
    case Phase::kMerge: return dirty_total_ == 0;
    case Phase::kDone: return true;
  }
  return false;
}

void Simulator::advance_phase() {
  if (phase_ == Phase::kCompute) {
    ++barriers_;
    network_.skip_to(cycle_ + config_.barrier_latency);
    cycle_ = network_.now();
    last_progress_ = cycle_;
    phase_ = Phase::kMerge;
    frontier_enabled_ = false;
    flush_enabled_ = true;
    mark_all_active();
    return;
  }
  if (phase_ == Phase::kMerge && frontier_total_ != 0) {
    phase_ = Phase::kCompute;
    frontier_enabled_ = true;
    flush_enabled_ = false;
    mark_all_active();
    return;
  }
  workload_.end_epoch(epoch_);
  ++epoch_;
  if (epoch_ >= workload_.num_epochs()) {
    phase_ = Phase::kDone;
    return;
  }
  start_epoch();
  phase_ = traits_.sync ? Phase::kCompute : Phase::kAsync;
  frontier_enabled_ = true;
  flush_enabled_ = !traits_.sync;
  mark_all_active();
}

bool Simulator::step() {
  if (phase_ == Phase::kDone) return false;
  if (network_.advance_cycle(*this) > 0) last_progress_ = cycle_;
  for (const TileId r : network_.active_routers()) timeline_.record(r, cycle_, false, true);
  tiles_idle_ = true;
  for (std::size_t word = 0; word < active_tiles_.size(); ++word) {
    for (std::uint64_t bits = active_tiles_[word]; bits != 0; bits &= bits - 1) {
      TileState& t = tiles_[word * 64 + static_cast<std::size_t>(std::countr_zero(bits))];
      step_tile(t);
      if (tile_idle(t)) active_tiles_[word] &= ~(std::uint64_t{1} << (t.id % 64));
    }
  }
  ++cycle_;
  if (phase_complete()) advance_phase();
  if (phase_ != Phase::kDone && cycle_ - last_progress_ > config_.max_idle_cycles) fail_non_progress();
  if (config_.max_cycles != 0 && cycle_ >= config_.max_cycles && phase_ != Phase::kDone) {
    throw SimulationFault("cycle limit " + std::to_string(config_.max_cycles) + " reached");
  }
  if (observer_) observer_(*this);
  return phase_ != Phase::kDone;
}

void Simulator::run() {
  while (step()) {
  }
}

bool Simulator::quiescent() const {
  if (!network_.idle()) return false;
  for (const auto& t : tiles_) {
    if (!t.pu.idle() || !t.oqs_empty() || t.iq_total() != 0) return false;
    if (t.pcache && !t.pcache->clean()) return false;
  }
  return true;
}

std::uint64_t Simulator::updates_in_transit() const {
  std::uint64_t n = 0;
  for (const auto& t : tiles_) {
    for (const auto& m : t.pu.pending) n += is_update_channel(m.channel);
    n += t.oqs[kReduce].size() + t.oqs[kProxy].size();
    n += t.iqs[kReduce].size() + t.iqs[kProxy].size();
  }
  network_.for_each_message([&](const Message& m) { n += is_update_channel(m.channel); });
  return n;
}

std::uint64_t Simulator::pcache_filtered() const {
  std::uint64_t n = 0;
  for (const auto& t : tiles_) {
    if (t.pcache) n += t.pcache->counters().filtered;
  }
  return n;
}

MetricsLedger Simulator::ledger() const {
  MetricsLedger l;
  l.tiles.reserve(tiles_.size());
  for (const auto& t : tiles_) {
    TileCounters c = t.counters;
    c.router_active_cycles = network_.router_active_cycles(t.id);
    if (t.pcache) {
      const auto& pc = t.pcache->counters();
      c.pcache_hits = pc.hits;
      c.pcache_misses = pc.misses;
      c.pcache_evictions = pc.evictions;
      c.updates_filtered = pc.filtered;
      c.updates_coalesced = pc.coalesced;
    }
    l.tiles.push_back(c);
  }
  const auto& nc = network_.counters();
  auto& g = l.global;
  g.messages_injected = nc.injected;
  g.messages_delivered = nc.delivered;
  g.messages_captured = nc.captured;
  g.flit_hops = nc.flit_hops;
  g.boundary_flit_hops = nc.boundary_flit_hops;
  g.captures_declined_full = nc.captures_declined_full;
  g.total_cycles = cycle_;
  g.tasks_executed = tasks_executed_;
  g.owner_updates_applied = owner_applied_;
  g.owner_updates_rejected = owner_rejected_;
  g.pcache_update_attempts = pcache_attempts_;
  g.pcache_emissions = pcache_emissions_;
  g.barriers = barriers_;
  l.timeline = timeline_;
  l.timeline.finish(cycle_);
  return l;
}

void Simulator::fail_non_progress() const {
  std::ostringstream os;
  os << "no progress for " << config_.max_idle_cycles << " cycles at cycle " << cycle_ << " (phase "
     << to_string(phase_) << ", in flight " << network_.in_flight() << ")";
  int shown = 0;
  for (const auto& t : tiles_) {
    if (t.iq_total() == 0 && t.oqs_empty() && t.pu.idle()) continue;
    if (shown++ == 8) {
      os << "; ...";
      break;
    }
    os << "; tile " << t.id << " iq[";
    for (std::uint32_t ch = 0; ch < kNumChannels; ++ch) os << (ch ? "," : "") << t.queued(static_cast<std::uint8_t>(ch));
    os << "] oq[";
    for (std::uint32_t ch = 0; ch < kNumChannels; ++ch) os << (ch ? "," : "") << t.oqs[ch].size();
    os << "] pu " << t.pu.remaining;
  }
  throw SimulationFault(os.str());
}

}  // namespace tascade
