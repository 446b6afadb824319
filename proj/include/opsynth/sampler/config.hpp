// Copyright 2026 The opsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Sampling ranges and catalogs. The defaults here are mirrored by the
// "sampler" section of configs/default.jsonc.

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "opsynth/core/json_io.hpp"
#include "opsynth/core/types.hpp"
#include "opsynth/solvers/config_json.hpp"

namespace opsynth {

struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  bool operator==(const IntRange&) const = default;
};

struct RealRange {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const RealRange&) const = default;
};

// LP, IP and MILP share one parameterization. Objective flavors with direction
// max use mostly "<=" capacity rows, min flavors mostly ">=" requirement rows;
// each row takes the other sense with secondary_sense_probability.
struct LinearSamplerConfig {
  IntRange variables{2, 8};
  IntRange constraints{2, 6};
  RealRange objective_coefficient{5.0, 60.0};
  int objective_decimals = 2;
  RealRange matrix_coefficient{1.0, 12.0};
  int matrix_decimals = 1;
  IntRange capacity_rhs{40, 240};
  IntRange requirement_rhs{10, 80};
  double secondary_sense_probability = 0.2;
  double integer_probability = 0.5;  // MILP only; at least one of each kind
  bool operator==(const LinearSamplerConfig&) const = default;
};

// Cities are random points; distances are rounded Euclidean lengths.
struct TspSamplerConfig {
  IntRange cities{5, 12};
  RealRange coordinate{0.0, 100.0};
  bool operator==(const TspSamplerConfig&) const = default;
};

struct MaxFlowSamplerConfig {
  IntRange nodes{4, 10};
  RealRange density{0.3, 0.6};
  IntRange capacity{5, 50};
  bool operator==(const MaxFlowSamplerConfig&) const = default;
};

struct AssignmentSamplerConfig {
  IntRange size{3, 8};
  IntRange cost{5, 100};
  bool operator==(const AssignmentSamplerConfig&) const = default;
};

struct MinCostFlowSamplerConfig {
  IntRange nodes{4, 10};
  RealRange density{0.3, 0.6};
  IntRange capacity{5, 40};
  IntRange unit_cost{1, 20};
  IntRange total_supply{10, 40};
  IntRange supply_nodes{1, 2};
  IntRange demand_nodes{1, 2};
  bool operator==(const MinCostFlowSamplerConfig&) const = default;
};

struct ContextEntry {
  std::string label;
  std::vector<ProblemType> types;
  double weight = 1.0;
  bool operator==(const ContextEntry&) const = default;
};

struct FlavorEntry {
  std::string label;
  ObjectiveDirection direction = ObjectiveDirection::Minimize;
  double weight = 1.0;
  bool operator==(const FlavorEntry&) const = default;
};

struct SamplerConfig {
  int max_resample_attempts = 50;
  LinearSamplerConfig linear;
  TspSamplerConfig tsp;
  MaxFlowSamplerConfig max_flow;
  AssignmentSamplerConfig assignment;
  MinCostFlowSamplerConfig min_cost_flow;
  std::vector<ContextEntry> contexts;
  std::map<ProblemType, std::vector<FlavorEntry>> flavors;
  std::vector<double> render_format_weights{1.0, 1.0, 1.0};  // kAllRenderFormats order
  SolverConfig solver;  // limits used for ground truth (from the "solver" section)

  bool operator==(const SamplerConfig&) const = default;

  std::vector<const ContextEntry*> contexts_for(ProblemType type) const {
    std::vector<const ContextEntry*> out;
    for (const ContextEntry& entry : contexts) {
      for (ProblemType t : entry.types) {
        if (t == type) {
          out.push_back(&entry);
          break;
        }
      }
    }
    return out;
  }
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline SamplerConfig default_sampler_config() {
  using P = ProblemType;
  const auto max = ObjectiveDirection::Maximize;
  const auto min = ObjectiveDirection::Minimize;
  SamplerConfig config;
  config.contexts = {
      {"agriculture", {P::LP, P::IP, P::MILP}, 1.0},
      {"manufacturing", {P::LP, P::IP, P::MILP, P::AP, P::MCF}, 1.0},
      {"finance", {P::LP, P::IP, P::MILP}, 1.0},
      {"logistics", {P::LP, P::MILP, P::TSP, P::MF, P::AP, P::MCF}, 1.0},
      {"energy", {P::LP, P::MILP, P::MF, P::MCF}, 1.0},
      {"healthcare", {P::LP, P::IP, P::AP}, 1.0},
      {"retail", {P::LP, P::IP, P::MILP, P::MCF}, 1.0},
      {"telecommunications", {P::MF, P::MCF}, 1.0},
      {"workforce scheduling", {P::IP, P::AP}, 1.0},
      {"delivery", {P::TSP, P::MCF}, 1.0},
      {"tourism", {P::TSP}, 1.0},
      {"water distribution", {P::MF, P::MCF}, 1.0},
      {"transportation", {P::TSP, P::MF, P::MCF}, 1.0},
      {"education", {P::LP, P::AP}, 1.0},
  };
  const std::vector<FlavorEntry> linear = {
      {"profit maximization", max, 2.0},
      {"cost minimization", min, 2.0},
      {"revenue maximization", max, 1.0},
      {"waste minimization", min, 1.0},
  };
  config.flavors[P::LP] = linear;
  config.flavors[P::IP] = linear;
  config.flavors[P::MILP] = linear;
  config.flavors[P::TSP] = {{"travel distance minimization", min, 1.0},
                            {"travel cost minimization", min, 1.0},
                            {"travel time minimization", min, 1.0}};
  config.flavors[P::MF] = {{"throughput maximization", max, 1.0}, {"delivery volume maximization", max, 1.0}};
  config.flavors[P::AP] = {{"cost minimization", min, 2.0},
                           {"time minimization", min, 1.0},
                           {"value maximization", max, 1.0},
                           {"productivity maximization", max, 1.0}};
  config.flavors[P::MCF] = {{"shipping cost minimization", min, 1.0},
                            {"transportation cost minimization", min, 1.0}};
  return config;
}

// Every violated rule, phrased with its config path.
inline std::vector<std::string> sampler_config_violations(const SamplerConfig& config) {
  std::vector<std::string> out;
  auto int_range = [&](const std::string& path, const IntRange& r, std::int64_t floor) {
    if (r.lo > r.hi) out.push_back(path + ": empty range [" + std::to_string(r.lo) + ", " + std::to_string(r.hi) + "]");
    if (r.lo < floor) out.push_back(path + ": lower end must be at least " + std::to_string(floor));
  };
  auto real_range = [&](const std::string& path, const RealRange& r, double floor) {
    if (!(r.lo <= r.hi)) out.push_back(path + ": empty range");
    if (!(r.lo >= floor)) out.push_back(path + ": lower end must be at least " + std::to_string(floor));
  };
  auto probability = [&](const std::string& path, double p) {
    if (!(p >= 0.0 && p <= 1.0)) out.push_back(path + ": must lie in [0, 1]");
  };
  if (config.max_resample_attempts < 1) out.push_back("sampler.max_resample_attempts: must be at least 1");
  const auto& lin = config.linear;
  int_range("sampler.linear.variables", lin.variables, 2);
  int_range("sampler.linear.constraints", lin.constraints, 1);
  real_range("sampler.linear.objective_coefficient", lin.objective_coefficient, 0.0);
  real_range("sampler.linear.matrix_coefficient", lin.matrix_coefficient, 0.0);
  if (!(lin.matrix_coefficient.hi > 0.0)) out.push_back("sampler.linear.matrix_coefficient: must allow positive values");
  int_range("sampler.linear.capacity_rhs", lin.capacity_rhs, 0);
  int_range("sampler.linear.requirement_rhs", lin.requirement_rhs, 0);
  if (lin.objective_decimals < 0 || lin.objective_decimals > 6) out.push_back("sampler.linear.objective_decimals: must be in [0, 6]");
  if (lin.matrix_decimals < 0 || lin.matrix_decimals > 6) out.push_back("sampler.linear.matrix_decimals: must be in [0, 6]");
  probability("sampler.linear.secondary_sense_probability", lin.secondary_sense_probability);
  probability("sampler.linear.integer_probability", lin.integer_probability);
  int_range("sampler.tsp.cities", config.tsp.cities, 3);
  if (config.tsp.cities.hi > static_cast<std::int64_t>(config.solver.tsp_exact_city_cap)) {
    out.push_back("sampler.tsp.cities: upper end exceeds solver.tsp_exact_city_cap (" +
                  std::to_string(config.solver.tsp_exact_city_cap) + ")");
  }
  real_range("sampler.tsp.coordinate", config.tsp.coordinate, -1e9);
  int_range("sampler.max_flow.nodes", config.max_flow.nodes, 2);
  real_range("sampler.max_flow.density", config.max_flow.density, 0.0);
  if (config.max_flow.density.hi > 1.0) out.push_back("sampler.max_flow.density: must not exceed 1");
  int_range("sampler.max_flow.capacity", config.max_flow.capacity, 0);
  int_range("sampler.assignment.size", config.assignment.size, 1);
  int_range("sampler.assignment.cost", config.assignment.cost, -1000000000);
  const auto& mcf = config.min_cost_flow;
  int_range("sampler.min_cost_flow.nodes", mcf.nodes, 2);
  real_range("sampler.min_cost_flow.density", mcf.density, 0.0);
  if (mcf.density.hi > 1.0) out.push_back("sampler.min_cost_flow.density: must not exceed 1");
  int_range("sampler.min_cost_flow.capacity", mcf.capacity, 0);
  int_range("sampler.min_cost_flow.unit_cost", mcf.unit_cost, -1000000000);
  int_range("sampler.min_cost_flow.total_supply", mcf.total_supply, 1);
  int_range("sampler.min_cost_flow.supply_nodes", mcf.supply_nodes, 1);
  int_range("sampler.min_cost_flow.demand_nodes", mcf.demand_nodes, 1);
  if (mcf.supply_nodes.hi + mcf.demand_nodes.hi > mcf.nodes.lo) {
    out.push_back("sampler.min_cost_flow: supply_nodes + demand_nodes upper ends exceed the smallest node count");
  }
  for (std::size_t i = 0; i < config.contexts.size(); ++i) {
    const auto& entry = config.contexts[i];
    const std::string path = "sampler.contexts[" + std::to_string(i) + "]";
    if (entry.label.empty()) out.push_back(path + ".label: must be nonempty");
    if (!(entry.weight > 0.0)) out.push_back(path + ".weight: must be positive");
  }
  for (ProblemType type : kAllProblemTypes) {
    const std::string name(to_string(type));
    if (config.contexts_for(type).empty()) out.push_back("sampler.contexts: no context applies to " + name);
    auto it = config.flavors.find(type);
    if (it == config.flavors.end() || it->second.empty()) {
      out.push_back("sampler.flavors." + name + ": at least one flavor required");
      continue;
    }
    for (std::size_t i = 0; i < it->second.size(); ++i) {
      const auto& flavor = it->second[i];
      const std::string path = "sampler.flavors." + name + "[" + std::to_string(i) + "]";
      if (!(flavor.weight > 0.0)) out.push_back(path + ".weight: must be positive");
      const bool fixed_min = type == ProblemType::TSP || type == ProblemType::MCF;
      if (fixed_min && flavor.direction != ObjectiveDirection::Minimize) out.push_back(path + ".direction: must be min");
      if (type == ProblemType::MF && flavor.direction != ObjectiveDirection::Maximize) {
        out.push_back(path + ".direction: must be max");
      }
    }
  }
  if (config.render_format_weights.size() != kAllRenderFormats.size()) {
    out.push_back("sampler.render_formats: one weight per format required");
  } else {
    for (std::size_t i = 0; i < kAllRenderFormats.size(); ++i) {
      if (!(config.render_format_weights[i] > 0.0)) {
        out.push_back("sampler.render_formats." + std::string(to_string(kAllRenderFormats[i])) +
                      ": must be positive");
      }
    }
  }
  for (const auto& v : config.solver.violations()) out.push_back("solver." + v);
  return out;
}

// ---- JSON --------------------------------------------------------------------

namespace detail {

inline Json int_range_json(const IntRange& r) { return Json::array({r.lo, r.hi}); }
inline Json real_range_json(const RealRange& r) { return Json::array({r.lo, r.hi}); }

inline IntRange int_range_from(const Json& value, const std::string& path) {
  const Json& array = as_array(value, path);
  if (array.size() != 2) throw FormatError(path, "expected [low, high]");
  return {as_int(array[0], child(path, 0)), as_int(array[1], child(path, 1))};
}

inline RealRange real_range_from(const Json& value, const std::string& path) {
  const Json& array = as_array(value, path);
  if (array.size() != 2) throw FormatError(path, "expected [low, high]");
  return {as_number(array[0], child(path, 0)), as_number(array[1], child(path, 1))};
}

// Reads an optional key into `target` using `read`.
template <typename T, typename Read>
void read_optional(const Json& object, std::string_view key, const std::string& path, T& target, Read read) {
  auto it = object.find(key);
  if (it != object.end()) target = read(*it, child(path, key));
}

inline void reject_unknown_keys(const Json& object, const std::string& path, std::initializer_list<std::string_view> keys) {
  if (!object.is_object()) throw FormatError(path, "expected an object");
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool known = false;
    for (auto key : keys) known = known || key == it.key();
    if (!known) throw FormatError(child(path, it.key()), "unknown field");
  }
}

}  // namespace detail

inline Json sampler_config_to_json(const SamplerConfig& config) {
  using detail::int_range_json;
  using detail::real_range_json;
  Json out;
  out["max_resample_attempts"] = config.max_resample_attempts;
  const auto& lin = config.linear;
  out["linear"] = {{"variables", int_range_json(lin.variables)},
                   {"constraints", int_range_json(lin.constraints)},
                   {"objective_coefficient", real_range_json(lin.objective_coefficient)},
                   {"objective_decimals", lin.objective_decimals},
                   {"matrix_coefficient", real_range_json(lin.matrix_coefficient)},
                   {"matrix_decimals", lin.matrix_decimals},
                   {"capacity_rhs", int_range_json(lin.capacity_rhs)},
                   {"requirement_rhs", int_range_json(lin.requirement_rhs)},
                   {"secondary_sense_probability", lin.secondary_sense_probability},
                   {"integer_probability", lin.integer_probability}};
  out["tsp"] = {{"cities", int_range_json(config.tsp.cities)},
                {"coordinate", real_range_json(config.tsp.coordinate)}};
  out["max_flow"] = {{"nodes", int_range_json(config.max_flow.nodes)},
                     {"density", real_range_json(config.max_flow.density)},
                     {"capacity", int_range_json(config.max_flow.capacity)}};
  out["assignment"] = {{"size", int_range_json(config.assignment.size)},
                       {"cost", int_range_json(config.assignment.cost)}};
  const auto& mcf = config.min_cost_flow;
  out["min_cost_flow"] = {{"nodes", int_range_json(mcf.nodes)},
                          {"density", real_range_json(mcf.density)},
                          {"capacity", int_range_json(mcf.capacity)},
                          {"unit_cost", int_range_json(mcf.unit_cost)},
                          {"total_supply", int_range_json(mcf.total_supply)},
                          {"supply_nodes", int_range_json(mcf.supply_nodes)},
                          {"demand_nodes", int_range_json(mcf.demand_nodes)}};
  Json contexts = Json::array();
  for (const auto& entry : config.contexts) {
    Json types = Json::array();
    for (ProblemType t : entry.types) types.push_back(std::string(to_string(t)));
    contexts.push_back({{"label", entry.label}, {"types", types}, {"weight", entry.weight}});
  }
  out["contexts"] = contexts;
  Json flavors = Json::object();
  for (ProblemType type : kAllProblemTypes) {
    auto it = config.flavors.find(type);
    if (it == config.flavors.end()) continue;
    Json list = Json::array();
    for (const auto& flavor : it->second) {
      list.push_back({{"label", flavor.label},
                      {"direction", std::string(to_string(flavor.direction))},
                      {"weight", flavor.weight}});
    }
    flavors[std::string(to_string(type))] = list;
  }
  out["flavors"] = flavors;
  Json formats = Json::object();
  for (std::size_t i = 0; i < kAllRenderFormats.size() && i < config.render_format_weights.size(); ++i) {
    formats[std::string(to_string(kAllRenderFormats[i]))] = config.render_format_weights[i];
  }
  out["render_formats"] = formats;
  return out;
}

// Keys that are absent keep their defaults; unknown keys are rejected so typos
// surface. Throws FormatError naming the offending path.
inline SamplerConfig sampler_config_from_json(const Json& object, const std::string& path = "sampler",
                                              SamplerConfig config = default_sampler_config()) {
  using namespace detail;
  reject_unknown_keys(object, path,
                      {"max_resample_attempts", "linear", "tsp", "max_flow", "assignment", "min_cost_flow", "contexts",
                       "flavors", "render_formats"});
  read_optional(object, "max_resample_attempts", path, config.max_resample_attempts, as_int);
  if (auto it = object.find("linear"); it != object.end()) {
    const std::string p = child(path, "linear");
    reject_unknown_keys(*it, p,
                        {"variables", "constraints", "objective_coefficient", "objective_decimals",
                         "matrix_coefficient", "matrix_decimals", "capacity_rhs", "requirement_rhs",
                         "secondary_sense_probability", "integer_probability"});
    auto& lin = config.linear;
    read_optional(*it, "variables", p, lin.variables, int_range_from);
    read_optional(*it, "constraints", p, lin.constraints, int_range_from);
    read_optional(*it, "objective_coefficient", p, lin.objective_coefficient, real_range_from);
    read_optional(*it, "objective_decimals", p, lin.objective_decimals, as_int);
    read_optional(*it, "matrix_coefficient", p, lin.matrix_coefficient, real_range_from);
    read_optional(*it, "matrix_decimals", p, lin.matrix_decimals, as_int);
    read_optional(*it, "capacity_rhs", p, lin.capacity_rhs, int_range_from);
    read_optional(*it, "requirement_rhs", p, lin.requirement_rhs, int_range_from);
    read_optional(*it, "secondary_sense_probability", p, lin.secondary_sense_probability, as_number);
    read_optional(*it, "integer_probability", p, lin.integer_probability, as_number);
  }
  if (auto it = object.find("tsp"); it != object.end()) {
    const std::string p = child(path, "tsp");
    reject_unknown_keys(*it, p, {"cities", "coordinate"});
    read_optional(*it, "cities", p, config.tsp.cities, int_range_from);
    read_optional(*it, "coordinate", p, config.tsp.coordinate, real_range_from);
  }
  if (auto it = object.find("max_flow"); it != object.end()) {
    const std::string p = child(path, "max_flow");
    reject_unknown_keys(*it, p, {"nodes", "density", "capacity"});
    read_optional(*it, "nodes", p, config.max_flow.nodes, int_range_from);
    read_optional(*it, "density", p, config.max_flow.density, real_range_from);
    read_optional(*it, "capacity", p, config.max_flow.capacity, int_range_from);
  }
  if (auto it = object.find("assignment"); it != object.end()) {
    const std::string p = child(path, "assignment");
    reject_unknown_keys(*it, p, {"size", "cost"});
    read_optional(*it, "size", p, config.assignment.size, int_range_from);
    read_optional(*it, "cost", p, config.assignment.cost, int_range_from);
  }
  if (auto it = object.find("min_cost_flow"); it != object.end()) {
    const std::string p = child(path, "min_cost_flow");
    reject_unknown_keys(*it, p,
                        {"nodes", "density", "capacity", "unit_cost", "total_supply", "supply_nodes", "demand_nodes"});
    auto& mcf = config.min_cost_flow;
    read_optional(*it, "nodes", p, mcf.nodes, int_range_from);
    read_optional(*it, "density", p, mcf.density, real_range_from);
    read_optional(*it, "capacity", p, mcf.capacity, int_range_from);
    read_optional(*it, "unit_cost", p, mcf.unit_cost, int_range_from);
    read_optional(*it, "total_supply", p, mcf.total_supply, int_range_from);
    read_optional(*it, "supply_nodes", p, mcf.supply_nodes, int_range_from);
    read_optional(*it, "demand_nodes", p, mcf.demand_nodes, int_range_from);
  }
  if (auto it = object.find("contexts"); it != object.end()) {
    const std::string p = child(path, "contexts");
    config.contexts.clear();
    const Json& list = as_array(*it, p);
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string ep = child(p, i);
      reject_unknown_keys(list[i], ep, {"label", "types", "weight"});
      ContextEntry entry;
      entry.label = as_string(field(list[i], "label", ep), child(ep, "label"));
      const std::string tp = child(ep, "types");
      const Json& types = as_array(field(list[i], "types", ep), tp);
      for (std::size_t t = 0; t < types.size(); ++t) {
        auto type = parse_problem_type(as_string(types[t], child(tp, t)));
        if (!type) throw FormatError(child(tp, t), "unknown problem type");
        entry.types.push_back(*type);
      }
      read_optional(list[i], "weight", ep, entry.weight, as_number);
      config.contexts.push_back(std::move(entry));
    }
  }
  if (auto it = object.find("flavors"); it != object.end()) {
    const std::string p = child(path, "flavors");
    if (!it->is_object()) throw FormatError(p, "expected an object");
    for (auto entry = it->begin(); entry != it->end(); ++entry) {
      const std::string tp = child(p, entry.key());
      auto type = parse_problem_type(entry.key());
      if (!type) throw FormatError(tp, "unknown problem type");
      std::vector<FlavorEntry> flavors;
      const Json& list = as_array(entry.value(), tp);
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string fp = child(tp, i);
        reject_unknown_keys(list[i], fp, {"label", "direction", "weight"});
        FlavorEntry flavor;
        flavor.label = as_string(field(list[i], "label", fp), child(fp, "label"));
        flavor.direction = direction_from_json(field(list[i], "direction", fp), child(fp, "direction"));
        read_optional(list[i], "weight", fp, flavor.weight, as_number);
        flavors.push_back(std::move(flavor));
      }
      config.flavors[*type] = std::move(flavors);
    }
  }
  if (auto it = object.find("render_formats"); it != object.end()) {
    const std::string p = child(path, "render_formats");
    if (!it->is_object()) throw FormatError(p, "expected an object");
    for (auto entry = it->begin(); entry != it->end(); ++entry) {
      auto format = parse_render_format(entry.key());
      if (!format) throw FormatError(child(p, entry.key()), "unknown render format");
      config.render_format_weights[static_cast<std::size_t>(*format)] =
          as_number(entry.value(), child(p, entry.key()));
    }
  }
  return config;
}

// Stable hash of the effective configuration (recorded in manifests).
inline std::string sampler_config_hash(const SamplerConfig& config) {
  Json all = sampler_config_to_json(config);
  all["solver"] = solver_config_to_json(config.solver);
  return sha256_hex(all.dump());
}

}  // namespace opsynth
