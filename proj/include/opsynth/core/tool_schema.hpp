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

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "opsynth/core/json_io.hpp"
#include "opsynth/core/types.hpp"

namespace opsynth {

// Value shapes accepted by tool parameters.
enum class ParamKind {
  Direction,      // "max" | "min"
  Integer,        // number integral within 1e-9
  NumberVector,   // [number, ...]
  BoundVector,    // [number | "infinity", ...]
  NumberMatrix,   // [[number, ...], ...]
  SenseVector,    // ["<=" | ">=" | "=", ...]
  BooleanVector,  // [bool, ...]
  ArcList,        // [[integer, integer, number...], ...] with fixed row width
};

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::NumberVector;
  bool required = true;
  std::string description;
  std::size_t row_width = 0;  // ArcList only

  bool operator==(const ParamSpec&) const = default;
};

struct ToolSchema {
  std::string name;
  ProblemType problem_type = ProblemType::LP;
  std::string description;
  std::vector<ParamSpec> parameters;

  const ParamSpec* find_parameter(std::string_view param) const {
    for (const ParamSpec& spec : parameters) {
      if (spec.name == param) return &spec;
    }
    return nullptr;
  }

  bool operator==(const ToolSchema&) const = default;
};

inline std::string descriptor(const ParamSpec& spec) {
  switch (spec.kind) {
    case ParamKind::Direction: return "\"max\" | \"min\"";
    case ParamKind::Integer: return "integer";
    case ParamKind::NumberVector: return "number[]";
    case ParamKind::BoundVector: return "(number | \"infinity\")[]";
    case ParamKind::NumberMatrix: return "number[][]";
    case ParamKind::SenseVector: return "(\"<=\" | \">=\" | \"=\")[]";
    case ParamKind::BooleanVector: return "boolean[]";
    case ParamKind::ArcList:
      return spec.row_width == 3 ? "[from: integer, to: integer, capacity: number][]"
                                 : "[from: integer, to: integer, capacity: number, unit_cost: number][]";
  }
  return "?";
}

inline Json param_json_schema(const ParamSpec& spec) {
  Json number = {{"type", "number"}};
  Json out;
  switch (spec.kind) {
    case ParamKind::Direction:
      out = {{"type", "string"}, {"enum", {"max", "min"}}};
      break;
    case ParamKind::Integer:
      out = {{"type", "integer"}};
      break;
    case ParamKind::NumberVector:
      out = {{"type", "array"}, {"items", number}};
      break;
    case ParamKind::BoundVector:
      out = {{"type", "array"},
             {"items", {{"anyOf", {number, Json{{"type", "string"}, {"enum", {"infinity"}}}}}}}};
      break;
    case ParamKind::NumberMatrix:
      out = {{"type", "array"}, {"items", {{"type", "array"}, {"items", number}}}};
      break;
    case ParamKind::SenseVector:
      out = {{"type", "array"}, {"items", {{"type", "string"}, {"enum", {"<=", ">=", "="}}}}};
      break;
    case ParamKind::BooleanVector:
      out = {{"type", "array"}, {"items", {{"type", "boolean"}}}};
      break;
    case ParamKind::ArcList:
      out = {{"type", "array"},
             {"items",
              {{"type", "array"},
               {"items", number},
               {"minItems", spec.row_width},
               {"maxItems", spec.row_width}}}};
      break;
  }
  out["description"] = spec.description;
  return out;
}

// Function-calling style schema object: {"name", "description", "parameters"}.
inline Json schema_to_json(const ToolSchema& schema) {
  Json properties = Json::object();
  Json required = Json::array();
  for (const ParamSpec& spec : schema.parameters) {
    properties[spec.name] = param_json_schema(spec);
    if (spec.required) required.push_back(spec.name);
  }
  Json out;
  out["name"] = schema.name;
  out["description"] = schema.description;
  out["parameters"] = {{"type", "object"}, {"properties", std::move(properties)}, {"required", std::move(required)}};
  return out;
}

class ToolRegistry {
 public:
  ToolRegistry() = default;
  explicit ToolRegistry(std::vector<ToolSchema> schemas) {
    for (auto& schema : schemas) add(std::move(schema));
  }

  void add(ToolSchema schema) {
    if (find(schema.name)) throw std::invalid_argument("duplicate tool name: " + schema.name);
    schemas_.push_back(std::move(schema));
  }

  const ToolSchema* find(std::string_view name) const {
    for (const ToolSchema& schema : schemas_) {
      if (schema.name == name) return &schema;
    }
    return nullptr;
  }

  const ToolSchema& for_type(ProblemType type) const {
    for (const ToolSchema& schema : schemas_) {
      if (schema.problem_type == type) return schema;
    }
    throw std::out_of_range("no tool registered for " + std::string(to_string(type)));
  }

  const std::vector<ToolSchema>& schemas() const { return schemas_; }
  std::size_t size() const { return schemas_.size(); }

  Json to_json() const {
    Json out = Json::array();
    for (const ToolSchema& schema : schemas_) out.push_back(schema_to_json(schema));
    return out;
  }

 private:
  std::vector<ToolSchema> schemas_;
};

namespace detail {

inline std::vector<ParamSpec> linear_program_params(bool with_integer_flags) {
  std::vector<ParamSpec> params = {
      {"objective", ParamKind::Direction, true, "Optimization direction: \"max\" or \"min\"."},
      {"c", ParamKind::NumberVector, true, "Objective coefficient of each decision variable."},
      {"A", ParamKind::NumberMatrix, true,
       "Constraint coefficient matrix, one row per constraint and one column per variable."},
      {"senses", ParamKind::SenseVector, true, "Relation of each constraint row: \"<=\", \">=\" or \"=\"."},
      {"b", ParamKind::NumberVector, true, "Right-hand side of each constraint row."},
  };
  if (with_integer_flags) {
    params.push_back({"integer", ParamKind::BooleanVector, true,
                      "Whether each variable must take an integer value."});
  }
  params.push_back({"lower", ParamKind::NumberVector, false,
                    "Lower bound of each variable (default: all zero)."});
  params.push_back({"upper", ParamKind::BoundVector, false,
                    "Upper bound of each variable, \"infinity\" when unbounded (default: all unbounded)."});
  return params;
}

}  // namespace detail

inline ToolRegistry make_builtin_registry() {
  std::vector<ToolSchema> schemas;
  schemas.push_back({"solve_lp", ProblemType::LP,
                     "Solve a linear program with continuous variables: optimize c.x subject to A x (senses) b "
                     "and variable bounds.",
                     detail::linear_program_params(false)});
  schemas.push_back({"solve_ip", ProblemType::IP,
                     "Solve an integer program in which every decision variable must be integer: optimize c.x "
                     "subject to A x (senses) b and variable bounds.",
                     detail::linear_program_params(false)});
  schemas.push_back({"solve_milp", ProblemType::MILP,
                     "Solve a mixed-integer linear program in which some variables are integer and the rest "
                     "continuous: optimize c.x subject to A x (senses) b and variable bounds.",
                     detail::linear_program_params(true)});
  schemas.push_back({"solve_tsp", ProblemType::TSP,
                     "Find the minimum-cost round trip visiting every city exactly once (traveling salesman).",
                     {{"dist", ParamKind::NumberMatrix, true,
                       "Square matrix of travel costs; dist[i][j] is the cost from city i to city j."}}});
  schemas.push_back({"solve_max_flow", ProblemType::MF,
                     "Compute the maximum flow that can be sent from a source node to a sink node through a "
                     "capacitated network.",
                     {{"num_nodes", ParamKind::Integer, true, "Number of nodes, labelled 0 to num_nodes-1."},
                      {"arcs", ParamKind::ArcList, true, "Directed arcs as [from, to, capacity].", 3},
                      {"source", ParamKind::Integer, true, "Index of the source node."},
                      {"sink", ParamKind::Integer, true, "Index of the sink node."}}});
  schemas.push_back({"solve_assignment", ProblemType::AP,
                     "Assign each agent to exactly one task (one agent per task) optimizing the total cost or "
                     "value.",
                     {{"objective", ParamKind::Direction, true, "\"min\" for total cost, \"max\" for total value."},
                      {"cost", ParamKind::NumberMatrix, true,
                       "Square matrix; cost[i][j] is the cost or value of giving task j to agent i."}}});
  schemas.push_back({"solve_min_cost_flow", ProblemType::MCF,
                     "Ship goods through a capacitated network at minimum total cost so that every node's "
                     "supply or demand is met.",
                     {{"num_nodes", ParamKind::Integer, true, "Number of nodes, labelled 0 to num_nodes-1."},
                      {"arcs", ParamKind::ArcList, true,
                       "Directed arcs as [from, to, capacity, unit_cost].", 4},
                      {"supplies", ParamKind::NumberVector, true,
                       "Net supply of each node: positive for supply, negative for demand; sums to zero."}}});
  return ToolRegistry(std::move(schemas));
}

inline const ToolRegistry& builtin_registry() {
  static const ToolRegistry registry = make_builtin_registry();
  return registry;
}

// API usage description handed to the answer generator.
inline std::string render_tool_doc(const ToolSchema& schema) {
  std::string doc = "Tool: " + schema.name + "\n" + schema.description + "\n";
  doc += "Call syntax: " + schema.name + "(";
  bool first = true;
  for (const ParamSpec& spec : schema.parameters) {
    if (!spec.required) continue;
    if (!first) doc += ", ";
    doc += spec.name + "=...";
    first = false;
  }
  doc += ")\nParameters:\n";
  for (const ParamSpec& spec : schema.parameters) {
    doc += "  - " + spec.name + " (" + (spec.required ? "required" : "optional") + ", " +
           descriptor(spec) + "): " + spec.description + "\n";
  }
  doc += "Arguments are keyword-only; values are JSON literals (numbers, \"strings\", true/false, "
         "[arrays]).\n";
  return doc;
}

}  // namespace opsynth
