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

#include "tascade/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "tascade/geometry.hpp"

namespace tascade {

namespace {

using nlohmann::json;

constexpr std::uint32_t kDeskGridLimit = 128;
constexpr std::uint32_t kDeskScaleLimit = 18;

std::string join_errors(const std::vector<std::string>& errors) {
  std::ostringstream os;
  os << "invalid configuration";
  for (const auto& e : errors) os << "\n  - " << e;
  return os.str();
}

WritePolicy parse_policy(std::string_view name) {
  if (name == "write_through") return WritePolicy::kWriteThrough;
  if (name == "write_back") return WritePolicy::kWriteBack;
  throw std::invalid_argument("unknown write policy '" + std::string(name) + "'");
}

std::string_view to_string(DatasetSpec::Kind k) {
  switch (k) {
    case DatasetSpec::Kind::kRmat: return "rmat";
    case DatasetSpec::Kind::kFile: return "file";
    case DatasetSpec::Kind::kEdgeList: return "edge_list";
  }
  return "?";
}

bool non_negative_integer(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

// Accepts 0.0625 or "1/16".
double parse_fraction(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return std::stod(s);
    const double num = std::stod(s.substr(0, slash));
    const double den = std::stod(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return num / den;
  }
  throw std::invalid_argument("expected a number or \"a/b\"");
}

std::uint64_t prev_pow2(std::uint64_t v) {
  if (v == 0) return 0;
  std::uint64_t p = 1;
  while (p <= v / 2) p <<= 1;
  return p;
}

// Reads fields of one JSON object, recording type errors and unknown keys
// instead of stopping at the first problem.
class Reader {
 public:
  Reader(const json& obj, std::string prefix, std::vector<std::string>& errors)
      : obj_(obj), prefix_(std::move(prefix)), errors_(errors) {
    if (!obj_.is_object()) errors_.push_back(name("") + " must be an object");
  }

  ~Reader() {
    if (!obj_.is_object()) return;
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) errors_.push_back("unknown key '" + name(key) + "'");
    }
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    if (!obj_.is_object()) return nullptr;
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    const json* v = find(key);
    if (!v) return;
    try {
      if constexpr (std::is_unsigned_v<T>) {
        if (!non_negative_integer(*v)) throw std::invalid_argument("expected a non-negative integer");
        const auto raw = v->get<std::uint64_t>();
        if (raw > std::numeric_limits<T>::max()) throw std::invalid_argument("value out of range");
        out = static_cast<T>(raw);
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v->is_number()) throw std::invalid_argument("expected a number");
        out = v->get<T>();
      } else {
        if (!v->is_string()) throw std::invalid_argument("expected a string");
        out = v->get<T>();
      }
    } catch (const std::exception& e) {
      errors_.push_back(name(key) + ": " + e.what());
    }
  }

  // String field converted through `parse`.
  template <typename T, typename Parse>
  void get_enum(const std::string& key, T& out, Parse parse) {
    const json* v = find(key);
    if (!v) return;
    try {
      if (!v->is_string()) throw std::invalid_argument("expected a string");
      out = parse(v->get<std::string>());
    } catch (const std::exception& e) {
      errors_.push_back(name(key) + ": " + e.what());
    }
  }

  void error(const std::string& key, const std::string& what) { errors_.push_back(name(key) + ": " + what); }
  std::string name(const std::string& key) const {
    if (prefix_.empty()) return key;
    return key.empty() ? prefix_ : prefix_ + "." + key;
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

RunConfig RunConfig::from_json(const json& j, bool allow_large) {
  RunConfig c;
  std::vector<std::string> errors;
  {
    Reader r(j, "", errors);
    if (const json* g = r.find("grid")) {
      Reader gr(*g, "grid", errors);
      gr.get("width", c.width);
      gr.get("height", c.height);
    }
    r.get_enum("topology", c.topology, [](const std::string& s) { return parse_topology(s); });
    r.get("chip_pane", c.chip_pane);
    r.get_enum("workload", c.workload, [](const std::string& s) { return parse_workload(s); });
    if (const json* p = r.find("workload_params")) {
      Reader pr(*p, "workload_params", errors);
      pr.get("search_key", c.params.search_key);
      pr.get("pagerank_epochs", c.params.pagerank_epochs);
      pr.get("damping_pct", c.params.damping_pct);
      pr.get("edges_per_task", c.params.edges_per_task);
      pr.get("elements_per_task", c.params.elements_per_task);
    }
    if (const json* d = r.find("dataset")) {
      Reader dr(*d, "dataset", errors);
      std::string kind = "rmat";
      dr.get("kind", kind);
      if (kind == "rmat") {
        c.dataset.kind = DatasetSpec::Kind::kRmat;
      } else if (kind == "file") {
        c.dataset.kind = DatasetSpec::Kind::kFile;
      } else if (kind == "edge_list") {
        c.dataset.kind = DatasetSpec::Kind::kEdgeList;
      } else {
        dr.error("kind", "unknown dataset kind '" + kind + "' (rmat, file, edge_list)");
      }
      dr.get("scale", c.dataset.scale);
      dr.get("edge_factor", c.dataset.edge_factor);
      dr.get("seed", c.dataset.seed);
      dr.get("path", c.dataset.path);
    }
    r.get_enum("mode", c.mode, [](const std::string& s) { return parse_mode(s); });
    if (const json* w = r.find("region_width")) {
      if (w->is_string() && w->get<std::string>() == "auto") {
        c.region_width.reset();
      } else if (non_negative_integer(*w) && w->get<std::uint64_t>() <= kDeskGridLimit * 1024) {
        c.region_width = w->get<std::uint32_t>();
      } else {
        r.error("region_width", "expected a positive integer or \"auto\"");
      }
    }
    if (const json* p = r.find("pcache")) {
      Reader pr(*p, "pcache", errors);
      pr.get("max", c.pcache_max);
      pr.get("ratio_c", c.ratio_c);
      if (const json* cap = pr.find("capacity")) {
        if (cap->is_string() && cap->get<std::string>() == "auto") {
          c.pcache_capacity.reset();
        } else if (non_negative_integer(*cap)) {
          c.pcache_capacity = cap->get<std::uint64_t>();
        } else {
          pr.error("capacity", "expected a positive integer or \"auto\"");
        }
      }
      if (const json* b = pr.find("budget")) {
        try {
          c.pcache_budget = parse_fraction(*b);
        } catch (const std::exception& e) {
          pr.error("budget", e.what());
        }
      }
    }
    r.get_enum("policy", c.policy, [](const std::string& s) -> std::optional<WritePolicy> {
      if (s == "natural") return std::nullopt;
      return parse_policy(s);
    });
    if (const json* q = r.find("queues")) {
      Reader qr(*q, "queues", errors);
      qr.get("iq_capacity", c.iq_capacity);
      qr.get("oq_capacity", c.oq_capacity);
      qr.get("buffer_flits", c.buffer_flits);
    }
    if (const json* n = r.find("network")) {
      Reader nr(*n, "network", errors);
      nr.get("router_delay", c.router_delay);
      nr.get("link_latency", c.link_latency);
      nr.get("boundary_latency", c.boundary_latency);
    }
    if (const json* t = r.find("task_cost")) {
      if (t->is_array() && t->size() == kNumChannels &&
          std::all_of(t->begin(), t->end(), [](const json& v) { return non_negative_integer(v); })) {
        for (std::uint32_t i = 0; i < kNumChannels; ++i) c.task_cost[i] = (*t)[i].get<std::uint32_t>();
      } else {
        r.error("task_cost", "expected an array of 4 non-negative integers (T1, T2, T3, T3')");
      }
    }
    r.get("barrier_latency", c.barrier_latency);
    r.get("activity_window", c.activity_window);
    r.get("max_idle_cycles", c.max_idle_cycles);
    r.get("energy_profile", c.energy_profile);
    r.get("frequency_hz", c.frequency_hz);
    r.get("seed", c.seed);
  }
  c.params.seed = c.seed;
  auto more = c.validate(allow_large);
  errors.insert(errors.end(), more.begin(), more.end());
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

json RunConfig::to_json() const {
  json j;
  j["grid"] = {{"width", width}, {"height", height}};
  j["topology"] = std::string(to_string(topology));
  j["chip_pane"] = chip_pane;
  j["workload"] = std::string(to_string(workload));
  j["workload_params"] = {{"search_key", params.search_key},
                          {"pagerank_epochs", params.pagerank_epochs},
                          {"damping_pct", params.damping_pct},
                          {"edges_per_task", params.edges_per_task},
                          {"elements_per_task", params.elements_per_task}};
  json d = {{"kind", std::string(to_string(dataset.kind))}};
  if (dataset.kind == DatasetSpec::Kind::kRmat) {
    d["scale"] = dataset.scale;
    d["edge_factor"] = dataset.edge_factor;
    d["seed"] = dataset.seed;
  } else {
    d["path"] = dataset.path;
  }
  j["dataset"] = d;
  j["mode"] = std::string(to_string(mode));
  if (region_width) {
    j["region_width"] = *region_width;
  } else {
    j["region_width"] = "auto";
  }
  json p = {{"max", pcache_max}, {"ratio_c", ratio_c}};
  if (pcache_capacity) p["capacity"] = *pcache_capacity;
  if (pcache_budget) p["budget"] = *pcache_budget;
  j["pcache"] = p;
  j["policy"] = policy ? std::string(to_string(*policy)) : std::string("natural");
  j["queues"] = {{"iq_capacity", iq_capacity}, {"oq_capacity", oq_capacity}, {"buffer_flits", buffer_flits}};
  j["network"] = {
      {"router_delay", router_delay}, {"link_latency", link_latency}, {"boundary_latency", boundary_latency}};
  j["task_cost"] = task_cost;
  j["barrier_latency"] = barrier_latency;
  j["activity_window"] = activity_window;
  j["max_idle_cycles"] = max_idle_cycles;
  j["energy_profile"] = energy_profile;
  j["frequency_hz"] = frequency_hz;
  j["seed"] = seed;
  return j;
}

std::vector<std::string> RunConfig::validate(bool allow_large) const {
  std::vector<std::string> errs;
  auto dim_ok = [&](const char* key, std::uint32_t v) {
    if (!is_pow2(v)) errs.push_back(std::string("grid.") + key + ": must be a power of two, got " + std::to_string(v));
    if (v > kDeskGridLimit && !allow_large) {
      errs.push_back(std::string("grid.") + key + ": " + std::to_string(v) + " exceeds the desk limit of " +
                     std::to_string(kDeskGridLimit) + " (pass --large)");
    }
  };
  dim_ok("width", width);
  dim_ok("height", height);
  if (chip_pane == 0) errs.push_back("chip_pane: must be positive");
  if (region_width) {
    const auto w = *region_width;
    if (!is_pow2(w)) {
      errs.push_back("region_width: must be a power of two, got " + std::to_string(w));
    } else if ((width && w > width) || (height && w > height)) {
      errs.push_back("region_width: " + std::to_string(w) + " does not divide the " + std::to_string(width) + "x" +
                     std::to_string(height) + " grid");
    }
  }
  if (dataset.kind == DatasetSpec::Kind::kRmat) {
    if (dataset.scale == 0 || dataset.scale > 40) errs.push_back("dataset.scale: must be in [1, 40]");
    if (dataset.scale > kDeskScaleLimit && !allow_large) {
      errs.push_back("dataset.scale: " + std::to_string(dataset.scale) + " exceeds the desk limit of " +
                     std::to_string(kDeskScaleLimit) + " (pass --large)");
    }
    if (dataset.edge_factor == 0) errs.push_back("dataset.edge_factor: must be positive");
  } else if (dataset.path.empty()) {
    errs.push_back("dataset.path: required for kind '" + std::string(to_string(dataset.kind)) + "'");
  }
  if (params.edges_per_task == 0) errs.push_back("workload_params.edges_per_task: must be positive");
  if (params.elements_per_task == 0) errs.push_back("workload_params.elements_per_task: must be positive");
  if (params.damping_pct > 100) errs.push_back("workload_params.damping_pct: must be <= 100");
  if (params.pagerank_epochs == 0) errs.push_back("workload_params.pagerank_epochs: must be positive");
  if (pcache_max == 0) errs.push_back("pcache.max: must be positive");
  if (ratio_c == 0) errs.push_back("pcache.ratio_c: must be positive");
  if (pcache_capacity && !is_pow2(*pcache_capacity)) {
    errs.push_back("pcache.capacity: must be a power of two, got " + std::to_string(*pcache_capacity));
  }
  if (pcache_budget && !(*pcache_budget > 0.0 && *pcache_budget <= 1.0)) {
    errs.push_back("pcache.budget: must be in (0, 1]");
  }
  if (pcache_capacity && pcache_budget) errs.push_back("pcache: capacity and budget are mutually exclusive");
  const bool additive = workload == WorkloadKind::kPageRank || workload == WorkloadKind::kSpmv ||
                        workload == WorkloadKind::kHistogram;
  if (mode != Mode::kNoProxy && policy == WritePolicy::kWriteThrough && additive) {
    errs.push_back("policy: write_through is unsupported for additive reductions (" +
                   std::string(to_string(workload)) + ")");
  }
  if (iq_capacity < 2) errs.push_back("queues.iq_capacity: must be at least 2");
  if (oq_capacity == 0) errs.push_back("queues.oq_capacity: must be positive");
  if (buffer_flits < kMaxMessageFlits) {
    errs.push_back("queues.buffer_flits: must be at least " + std::to_string(kMaxMessageFlits));
  }
  if (router_delay + link_latency == 0) errs.push_back("network: router_delay + link_latency must be at least 1");
  for (std::uint32_t i = 0; i < kNumChannels; ++i) {
    if (task_cost[i] == 0) errs.push_back("task_cost[" + std::to_string(i) + "]: must be positive");
  }
  try {
    (void)::tascade::energy_profile(energy_profile);
  } catch (const std::exception& e) {
    errs.push_back(std::string("energy_profile: ") + e.what());
  }
  if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz)) errs.push_back("frequency_hz: must be positive");
  if (max_idle_cycles == 0) errs.push_back("max_idle_cycles: must be positive");
  return errs;
}

ResolvedSizing resolve_sizing(const RunConfig& cfg, std::uint64_t reduction_length) {
  ResolvedSizing s;
  const std::uint64_t len = std::max<std::uint64_t>(reduction_length, 1);
  s.w_min = w_min({len, cfg.pcache_max, cfg.ratio_c});
  const std::uint32_t min_dim = std::min(cfg.width, cfg.height);
  if (cfg.region_width) {
    s.region_width = *cfg.region_width;
  } else {
    s.auto_width = true;
    std::uint32_t w = std::max<std::uint32_t>(16, s.w_min);
    if (w > min_dim / 2) w = std::max<std::uint32_t>(s.w_min, std::max<std::uint32_t>(min_dim / 2, 1));
    s.region_width = std::min(w, min_dim);
  }
  const GridGeometry geom(cfg.width, cfg.height, s.region_width);
  const Partition part = partition(reduction_length, geom.num_tiles());
  s.local_fraction = reduction_length ? ProxyAddressMap(part, geom, {0, 0}).fraction_length() : 0;
  const std::uint64_t padded = next_pow2(std::max<std::uint64_t>(s.local_fraction, 1));
  if (cfg.pcache_capacity) {
    s.pcache_capacity = *cfg.pcache_capacity;
  } else if (cfg.pcache_budget) {
    s.pcache_capacity = std::max<std::uint64_t>(
        1, prev_pow2(static_cast<std::uint64_t>(std::floor(static_cast<double>(padded) * *cfg.pcache_budget))));
  } else {
    const SizingInputs in{len, cfg.pcache_max, cfg.ratio_c};
    const std::uint64_t eq2 = s.region_width >= s.w_min ? p_cache_size(in, s.region_width) : cfg.pcache_max;
    s.pcache_capacity = std::max<std::uint64_t>(1, prev_pow2(eq2));
  }
  s.pcache_capacity = std::min(s.pcache_capacity, padded);
  return s;
}

SimConfig make_sim_config(const RunConfig& cfg, const ResolvedSizing& sizing) {
  SimConfig s;
  s.width = cfg.width;
  s.height = cfg.height;
  s.region_width = sizing.region_width;
  s.mode = cfg.mode;
  s.network.topology = cfg.topology;
  s.network.buffer_flits = cfg.buffer_flits;
  s.network.router_delay = cfg.router_delay;
  s.network.link_latency = cfg.link_latency;
  s.network.boundary_latency = cfg.boundary_latency;
  s.network.chip_pane = cfg.chip_pane;
  s.iq_capacity = cfg.iq_capacity;
  s.oq_capacity = cfg.oq_capacity;
  s.task_cost = cfg.task_cost;
  s.pcache_capacity = sizing.pcache_capacity;
  s.policy = cfg.policy;
  s.barrier_latency = cfg.barrier_latency;
  s.activity_window = cfg.activity_window;
  s.max_idle_cycles = cfg.max_idle_cycles;
  return s;
}

}  // namespace tascade
