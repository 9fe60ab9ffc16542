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

#include "tascade/metrics.hpp"

#include <cmath>
#include <cstddef>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace tascade {

namespace {

constexpr char kTimelineMagic[4] = {'A', 'C', 'T', '1'};

void put_u64(std::vector<std::byte>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const std::vector<std::byte>& in, std::size_t& pos) {
  if (pos + 8 > in.size()) throw std::runtime_error("truncated activity timeline");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(std::to_integer<std::uint8_t>(in[pos + i])) << (8 * i);
  pos += 8;
  return v;
}

void write_frame(const std::filesystem::path& stem, const std::vector<double>& values, std::uint32_t width,
                 std::uint32_t height) {
  std::ofstream pgm(stem.string() + ".pgm");
  std::ofstream csv(stem.string() + ".csv");
  if (!pgm || !csv) throw std::runtime_error("cannot write heatmap frame " + stem.string());
  pgm << "P2\n" << width << ' ' << height << "\n255\n";
  csv << std::setprecision(6);
  for (std::uint32_t y = 0; y < height; ++y) {
    for (std::uint32_t x = 0; x < width; ++x) {
      const double v = values[std::size_t{y} * width + x];
      pgm << (x ? " " : "") << static_cast<int>(std::lround(v * 255.0));
      csv << (x ? "," : "") << v;
    }
    pgm << '\n';
    csv << '\n';
  }
}

}  // namespace

ActivityTimeline::ActivityTimeline(std::uint32_t width, std::uint32_t height, Cycle window)
    : width_(width), height_(height), window_(window) {}

void ActivityTimeline::ensure(std::size_t w) {
  while (pu_.size() <= w) {
    pu_.emplace_back(std::size_t{width_} * height_, 0);
    router_.emplace_back(std::size_t{width_} * height_, 0);
  }
}

void ActivityTimeline::record(TileId tile, Cycle now, bool pu_active, bool router_active) {
  if (!enabled() || (!pu_active && !router_active)) return;
  const std::size_t w = now / window_;
  ensure(w);
  pu_[w][tile] += pu_active;
  router_[w][tile] += router_active;
}

void ActivityTimeline::finish(Cycle total_cycles) {
  total_cycles_ = total_cycles;
  if (enabled() && total_cycles > 0) ensure((total_cycles - 1) / window_);
}

std::vector<std::byte> ActivityTimeline::encode() const {
  std::vector<std::byte> out;
  for (char c : kTimelineMagic) out.push_back(static_cast<std::byte>(c));
  put_u64(out, width_);
  put_u64(out, height_);
  put_u64(out, window_);
  put_u64(out, total_cycles_);
  put_u64(out, pu_.size());
  for (const auto* series : {&pu_, &router_}) {
    for (const auto& w : *series) {
      for (auto v : w) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xff));
      }
    }
  }
  return out;
}

ActivityTimeline ActivityTimeline::decode(const std::vector<std::byte>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kTimelineMagic, 4) != 0) {
    throw std::runtime_error("not an activity timeline");
  }
  std::size_t pos = 4;
  ActivityTimeline t;
  t.width_ = static_cast<std::uint32_t>(get_u64(bytes, pos));
  t.height_ = static_cast<std::uint32_t>(get_u64(bytes, pos));
  t.window_ = get_u64(bytes, pos);
  t.total_cycles_ = get_u64(bytes, pos);
  const std::uint64_t windows = get_u64(bytes, pos);
  const std::size_t tiles = std::size_t{t.width_} * t.height_;
  if (bytes.size() - pos != windows * tiles * 8) throw std::runtime_error("truncated activity timeline");
  for (auto* series : {&t.pu_, &t.router_}) {
    series->assign(windows, std::vector<std::uint32_t>(tiles));
    for (auto& w : *series) {
      for (auto& v : w) {
        v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(std::to_integer<std::uint8_t>(bytes[pos + i])) << (8 * i);
        pos += 4;
      }
    }
  }
  return t;
}

double compute_teps(const FrontierStats& stats, Cycle cycles, double freq_hz) {
  if (cycles == 0) throw std::invalid_argument("TEPS undefined for a zero-cycle run");
  return static_cast<double>(stats.edges_traversed) / (static_cast<double>(cycles) / freq_hz);
}

EnergyModel energy_profile(std::string_view name) {
  if (name == "paper-like-7nm") return EnergyModel::paper_like_7nm();
  if (name == "zero") return {};
  throw std::invalid_argument("unknown energy profile '" + std::string(name) + "'");
}

EnergyBreakdown compute_energy(const MetricsLedger& ledger, const EnergyModel& model) {
  constexpr double kPico = 1e-12;
  std::uint64_t pu_cycles = 0;
  std::uint64_t sram_bytes = 0;
  for (const auto& t : ledger.tiles) {
    pu_cycles += t.pu_active_cycles;
    sram_bytes += t.sram_bytes;
  }
  EnergyBreakdown e;
  e.pu_j = static_cast<double>(pu_cycles) * model.pu_pj_per_cycle * kPico;
  e.sram_j = static_cast<double>(sram_bytes) * model.sram_pj_per_byte * kPico;
  e.noc_j = static_cast<double>(ledger.global.flit_hops) * model.router_pj_per_flit_hop * kPico;
  e.boundary_j = static_cast<double>(ledger.global.boundary_flit_hops) * kFlitBits * model.boundary_pj_per_bit * kPico;
  return e;
}

std::vector<HeatmapFrame> heatmap_frames(const ActivityTimeline& timeline, Cycle window) {
  if (!timeline.enabled()) throw std::invalid_argument("activity sampling was not enabled");
  if (window == 0 || window % timeline.window() != 0) {
    throw std::invalid_argument("heatmap window must be a positive multiple of the sampling window");
  }
  const std::size_t tiles = std::size_t{timeline.width()} * timeline.height();
  const Cycle total = timeline.total_cycles();
  const std::size_t per_frame = window / timeline.window();
  std::vector<HeatmapFrame> frames;
  for (Cycle begin = 0; begin < total; begin += window) {
    HeatmapFrame f;
    f.begin = begin;
    f.end = std::min(total, begin + window);
    f.pu.assign(tiles, 0.0);
    f.router.assign(tiles, 0.0);
    const std::size_t first = begin / timeline.window();
    for (std::size_t w = first; w < first + per_frame && w < timeline.num_windows(); ++w) {
      for (std::size_t t = 0; t < tiles; ++t) {
        f.pu[t] += timeline.pu_window(w)[t];
        f.router[t] += timeline.router_window(w)[t];
      }
    }
    const double span = static_cast<double>(f.end - f.begin);
    for (std::size_t t = 0; t < tiles; ++t) {
      f.pu[t] /= span;
      f.router[t] /= span;
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

std::size_t export_heatmap_frames(const ActivityTimeline& timeline, Cycle window, const std::filesystem::path& dir) {
  const auto frames = heatmap_frames(timeline, window);
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    std::ostringstream name;
    name << std::setw(4) << std::setfill('0') << i;
    write_frame(dir / ("pu_" + name.str()), frames[i].pu, timeline.width(), timeline.height());
    write_frame(dir / ("router_" + name.str()), frames[i].router, timeline.width(), timeline.height());
  }
  return frames.size();
}

}  // namespace tascade
