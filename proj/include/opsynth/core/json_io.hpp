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

// Instance file format: {"type": "<LP|IP|MILP|TSP|MF|AP|MCF>", "data": {...}}.
// Field names inside "data" mirror the domain types; unbounded upper bounds
// are written as the string "infinity".

#pragma once

#include <json.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "opsynth/core/hash.hpp"
#include "opsynth/core/types.hpp"

namespace opsynth {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kInfinitySentinel = "infinity";

class FormatError : public std::runtime_error {
 public:
  FormatError(std::string path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

namespace detail {

inline const Json& field(const Json& object, std::string_view key, const std::string& path) {
  if (!object.is_object()) throw FormatError(path, "expected an object");
  auto it = object.find(key);
  if (it == object.end()) throw FormatError(path, "missing field \"" + std::string(key) + "\"");
  return *it;
}

inline std::string child(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline std::string child(const std::string& path, std::size_t index) {
  return path + "[" + std::to_string(index) + "]";
}

inline double as_number(const Json& value, const std::string& path) {
  if (!value.is_number()) throw FormatError(path, "expected a number");
  return value.get<double>();
}

inline int as_int(const Json& value, const std::string& path) {
  double v = as_number(value, path);
  if (!is_integral(v, 1e-9) || std::abs(v) > 1e9) throw FormatError(path, "expected an integer");
  return static_cast<int>(std::llround(v));
}

inline bool as_bool(const Json& value, const std::string& path) {
  if (!value.is_boolean()) throw FormatError(path, "expected a boolean");
  return value.get<bool>();
}

inline std::string as_string(const Json& value, const std::string& path) {
  if (!value.is_string()) throw FormatError(path, "expected a string");
  return value.get<std::string>();
}

inline const Json& as_array(const Json& value, const std::string& path) {
  if (!value.is_array()) throw FormatError(path, "expected an array");
  return value;
}

inline std::vector<double> number_vector(const Json& value, const std::string& path) {
  std::vector<double> out;
  const Json& array = as_array(value, path);
  out.reserve(array.size());
  for (std::size_t i = 0; i < array.size(); ++i) out.push_back(as_number(array[i], child(path, i)));
  return out;
}

inline Matrix number_matrix(const Json& value, const std::string& path) {
  Matrix out;
  const Json& array = as_array(value, path);
  for (std::size_t i = 0; i < array.size(); ++i) out.push_back(number_vector(array[i], child(path, i)));
  return out;
}

inline Json bound_to_json(double value) {
  if (value == kInfinity) return std::string(kInfinitySentinel);
  return value;
}

inline double bound_from_json(const Json& value, const std::string& path) {
  if (value.is_string()) {
    const auto text = value.get<std::string>();
    if (text == kInfinitySentinel || text == "inf") return kInfinity;
    throw FormatError(path, "expected a number or \"infinity\"");
  }
  return as_number(value, path);
}

inline ObjectiveDirection direction_from_json(const Json& value, const std::string& path) {
  auto direction = parse_direction(as_string(value, path));
  if (!direction) throw FormatError(path, "expected \"max\" or \"min\"");
  return *direction;
}

inline Json lp_to_json(const LpInstance& lp) {
  Json senses = Json::array();
  for (Sense s : lp.senses) senses.push_back(std::string(to_string(s)));
  Json upper = Json::array();
  for (double u : lp.upper_bounds) upper.push_back(bound_to_json(u));
  Json integrality = Json::array();
  for (bool flag : lp.integrality) integrality.push_back(flag);
  Json out;
  out["objective_direction"] = std::string(to_string(lp.direction));
  out["c"] = lp.objective;
  out["A"] = lp.matrix;
  out["senses"] = std::move(senses);
  out["b"] = lp.rhs;
  out["lower_bounds"] = lp.lower_bounds;
  out["upper_bounds"] = std::move(upper);
  out["integrality"] = std::move(integrality);
  return out;
}

inline LpInstance lp_from_json(const Json& data, const std::string& path) {
  LpInstance lp;
  lp.direction = direction_from_json(field(data, "objective_direction", path),
                                     child(path, "objective_direction"));
  lp.objective = number_vector(field(data, "c", path), child(path, "c"));
  lp.matrix = number_matrix(field(data, "A", path), child(path, "A"));
  const Json& senses = as_array(field(data, "senses", path), child(path, "senses"));
  for (std::size_t i = 0; i < senses.size(); ++i) {
    const std::string p = child(child(path, "senses"), i);
    auto sense = parse_sense(as_string(senses[i], p));
    if (!sense) throw FormatError(p, "expected \"<=\", \">=\" or \"=\"");
    lp.senses.push_back(*sense);
  }
  lp.rhs = number_vector(field(data, "b", path), child(path, "b"));
  if (data.contains("lower_bounds")) {
    lp.lower_bounds = number_vector(data["lower_bounds"], child(path, "lower_bounds"));
  }
  if (data.contains("upper_bounds")) {
    const Json& upper = as_array(data["upper_bounds"], child(path, "upper_bounds"));
    for (std::size_t i = 0; i < upper.size(); ++i) {
      lp.upper_bounds.push_back(bound_from_json(upper[i], child(child(path, "upper_bounds"), i)));
    }
  }
  if (data.contains("integrality")) {
    const Json& flags = as_array(data["integrality"], child(path, "integrality"));
    for (std::size_t i = 0; i < flags.size(); ++i) {
      lp.integrality.push_back(as_bool(flags[i], child(child(path, "integrality"), i)));
    }
  }
  return lp;
}

}  // namespace detail

inline Json instance_data_to_json(const ProblemInstance& instance) {
  return std::visit(
      [](const auto& data) -> Json {
        using T = std::decay_t<decltype(data)>;
        Json out;
        if constexpr (std::is_same_v<T, LpInstance>) {
          out = detail::lp_to_json(data);
        } else if constexpr (std::is_same_v<T, TspInstance>) {
          out["n"] = data.size();
          out["dist"] = data.dist;
          out["symmetric"] = data.symmetric;
        } else if constexpr (std::is_same_v<T, MaxFlowInstance>) {
          out["node_count"] = data.node_count;
          Json arcs = Json::array();
          for (const FlowArc& arc : data.arcs) {
            arcs.push_back(Json{{"from", arc.from}, {"to", arc.to}, {"capacity", arc.capacity}});
          }
          out["arcs"] = std::move(arcs);
          out["source"] = data.source;
          out["sink"] = data.sink;
        } else if constexpr (std::is_same_v<T, AssignmentInstance>) {
          out["n"] = data.size();
          out["cost"] = data.cost;
          out["objective_direction"] = std::string(to_string(data.direction));
        } else {
          out["node_count"] = data.node_count;
          Json arcs = Json::array();
          for (const CostArc& arc : data.arcs) {
            arcs.push_back(Json{{"from", arc.from},
                                {"to", arc.to},
                                {"capacity", arc.capacity},
                                {"unit_cost", arc.unit_cost}});
          }
          out["arcs"] = std::move(arcs);
          out["supplies"] = data.supplies;
        }
        return out;
      },
      instance.data);
}

inline Json instance_to_json(const ProblemInstance& instance) {
  Json out;
  out["type"] = std::string(to_string(instance.type));
  out["data"] = instance_data_to_json(instance);
  return out;
}

// Throws FormatError naming the offending field path.
inline ProblemInstance instance_from_json(const Json& object, const std::string& path = "") {
  using namespace detail;
  const std::string type_name = as_string(field(object, "type", path), child(path, "type"));
  auto type = parse_problem_type(type_name);
  if (!type) throw FormatError(child(path, "type"), "unknown problem type \"" + type_name + "\"");
  const Json& data = field(object, "data", path);
  const std::string dpath = child(path, "data");
  if (!data.is_object()) throw FormatError(dpath, "expected an object");

  ProblemInstance instance;
  instance.type = *type;
  switch (*type) {
    case ProblemType::LP:
    case ProblemType::IP:
    case ProblemType::MILP: {
      // Omitted bounds default to [0, inf); omitted flags follow the type.
      LpInstance lp = lp_from_json(data, dpath);
      const std::size_t n = lp.num_variables();
      if (!data.contains("lower_bounds")) lp.lower_bounds.assign(n, 0.0);
      if (!data.contains("upper_bounds")) lp.upper_bounds.assign(n, kInfinity);
      if (!data.contains("integrality")) lp.integrality.assign(n, *type == ProblemType::IP);
      instance.data = std::move(lp);
      break;
    }
    case ProblemType::TSP: {
      TspInstance tsp;
      tsp.dist = number_matrix(field(data, "dist", dpath), child(dpath, "dist"));
      if (data.contains("n") && as_int(data["n"], child(dpath, "n")) != static_cast<int>(tsp.size())) {
        throw FormatError(child(dpath, "n"), "does not match the number of rows of dist");
      }
      tsp.symmetric = data.contains("symmetric") ? as_bool(data["symmetric"], child(dpath, "symmetric"))
                                                 : true;
      instance.data = std::move(tsp);
      break;
    }
    case ProblemType::MF: {
      MaxFlowInstance mf;
      mf.node_count = as_int(field(data, "node_count", dpath), child(dpath, "node_count"));
      const Json& arcs = as_array(field(data, "arcs", dpath), child(dpath, "arcs"));
      for (std::size_t e = 0; e < arcs.size(); ++e) {
        const std::string p = child(child(dpath, "arcs"), e);
        mf.arcs.push_back({as_int(field(arcs[e], "from", p), child(p, "from")),
                           as_int(field(arcs[e], "to", p), child(p, "to")),
                           as_number(field(arcs[e], "capacity", p), child(p, "capacity"))});
      }
      mf.source = as_int(field(data, "source", dpath), child(dpath, "source"));
      mf.sink = as_int(field(data, "sink", dpath), child(dpath, "sink"));
      instance.data = std::move(mf);
      break;
    }
    case ProblemType::AP: {
      AssignmentInstance ap;
      ap.cost = number_matrix(field(data, "cost", dpath), child(dpath, "cost"));
      if (data.contains("n") && as_int(data["n"], child(dpath, "n")) != static_cast<int>(ap.size())) {
        throw FormatError(child(dpath, "n"), "does not match the number of rows of cost");
      }
      ap.direction = data.contains("objective_direction")
                         ? direction_from_json(data["objective_direction"],
                                               child(dpath, "objective_direction"))
                         : ObjectiveDirection::Minimize;
      instance.data = std::move(ap);
      break;
    }
    case ProblemType::MCF: {
      MinCostFlowInstance mcf;
      mcf.node_count = as_int(field(data, "node_count", dpath), child(dpath, "node_count"));
      const Json& arcs = as_array(field(data, "arcs", dpath), child(dpath, "arcs"));
      for (std::size_t e = 0; e < arcs.size(); ++e) {
        const std::string p = child(child(dpath, "arcs"), e);
        mcf.arcs.push_back({as_int(field(arcs[e], "from", p), child(p, "from")),
                            as_int(field(arcs[e], "to", p), child(p, "to")),
                            as_number(field(arcs[e], "capacity", p), child(p, "capacity")),
                            as_number(field(arcs[e], "unit_cost", p), child(p, "unit_cost"))});
      }
      mcf.supplies = number_vector(field(data, "supplies", dpath), child(dpath, "supplies"));
      instance.data = std::move(mcf);
      break;
    }
  }
  return instance;
}

// Canonical digest of an instance's parameters (used for train/test overlap
// detection).
inline std::string instance_hash(const ProblemInstance& instance) {
  return sha256_hex(instance_to_json(instance).dump());
}

inline Json result_to_json(const SolverResult& result) {
  Json out;
  out["status"] = std::string(to_string(result.status));
  if (result.objective) out["objective"] = *result.objective;
  if (result.assignment) {
    Json values = Json::object();
    for (const auto& [name, value] : *result.assignment) values[name] = value;
    out["assignment"] = std::move(values);
  }
  if (result.message) out["message"] = *result.message;
  return out;
}

inline SolverResult result_from_json(const Json& object, const std::string& path = "") {
  using namespace detail;
  const std::string status_text = as_string(field(object, "status", path), child(path, "status"));
  auto status = parse_solve_status(status_text);
  if (!status) throw FormatError(child(path, "status"), "unknown status \"" + status_text + "\"");
  switch (*status) {
    case SolveStatus::Optimal: {
      Assignment assignment;
      const Json& values = field(object, "assignment", path);
      if (!values.is_object()) throw FormatError(child(path, "assignment"), "expected an object");
      for (auto it = values.begin(); it != values.end(); ++it) {
        assignment.emplace_back(it.key(), as_number(it.value(), child(child(path, "assignment"), it.key())));
      }
      return SolverResult::optimal(as_number(field(object, "objective", path), child(path, "objective")),
                                   std::move(assignment));
    }
    case SolveStatus::Infeasible: return SolverResult::infeasible();
    case SolveStatus::Unbounded: return SolverResult::unbounded();
    case SolveStatus::Error:
      return SolverResult::error(object.contains("message") ? as_string(object["message"], child(path, "message"))
                                                            : std::string());
  }
  return SolverResult::error("unreachable");
}

inline Json key_info_to_json(const KeyInfo& info) {
  Json out = instance_to_json(info.instance);
  out["context"] = info.context;
  out["objective_flavor"] = info.objective_flavor;
  out["render_format"] = std::string(to_string(info.render_format));
  out["ground_truth"] = result_to_json(info.ground_truth);
  return out;
}

inline KeyInfo key_info_from_json(const Json& object, const std::string& path = "") {
  using namespace detail;
  KeyInfo info;
  info.instance = instance_from_json(object, path);
  info.context = as_string(field(object, "context", path), child(path, "context"));
  info.objective_flavor = as_string(field(object, "objective_flavor", path), child(path, "objective_flavor"));
  const std::string format = as_string(field(object, "render_format", path), child(path, "render_format"));
  auto parsed = parse_render_format(format);
  if (!parsed) throw FormatError(child(path, "render_format"), "unknown render format \"" + format + "\"");
  info.render_format = *parsed;
  info.ground_truth = result_from_json(field(object, "ground_truth", path), child(path, "ground_truth"));
  return info;
}

}  // namespace opsynth
