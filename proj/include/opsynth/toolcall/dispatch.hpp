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

// Schema checking, argument conversion and execution of tool calls, plus the
// inverse direction (building the reference call for a sampled instance).

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>

#include "opsynth/core/tool_schema.hpp"
#include "opsynth/solvers/solve.hpp"
#include "opsynth/toolcall/call.hpp"
#include "opsynth/toolcall/serialize.hpp"

namespace opsynth {

// Integer-typed slots must be integral within this tolerance.
inline constexpr double kCallIntegerTolerance = 1e-9;

// Upper limit on num_nodes so a malformed call cannot request a huge graph.
inline constexpr int kMaxCallNodes = 100000;

// Thrown by call_to_instance; dispatch turns it into an error result.
class CallSchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

[[noreturn]] inline void shape_error(const ParamSpec& spec) {
  throw CallSchemaError("parameter " + spec.name + ": expected " + descriptor(spec));
}

inline bool is_call_integer(const Value& value) {
  return value.is_number() && std::abs(value.number() - std::round(value.number())) <= kCallIntegerTolerance &&
         std::abs(value.number()) < 2147483648.0;
}

inline void check_shape(const ParamSpec& spec, const Value& value) {
  auto numbers = [](const Value& v) {
    return v.is_array() &&
           std::all_of(v.array().begin(), v.array().end(), [](const Value& item) { return item.is_number(); });
  };
  bool ok = false;
  switch (spec.kind) {
    case ParamKind::Direction:
      ok = value.is_string() && parse_direction(value.string()).has_value();
      break;
    case ParamKind::Integer:
      ok = is_call_integer(value);
      break;
    case ParamKind::NumberVector:
      ok = numbers(value);
      break;
    case ParamKind::BoundVector:
      ok = value.is_array() && std::all_of(value.array().begin(), value.array().end(), [](const Value& item) {
             return item.is_number() || (item.is_string() && (item.string() == "infinity" || item.string() == "inf"));
           });
      break;
    case ParamKind::NumberMatrix:
      ok = value.is_array() && std::all_of(value.array().begin(), value.array().end(), numbers);
      break;
    case ParamKind::SenseVector:
      ok = value.is_array() && std::all_of(value.array().begin(), value.array().end(), [](const Value& item) {
             return item.is_string() && parse_sense(item.string()).has_value();
           });
      break;
    case ParamKind::BooleanVector:
      ok = value.is_array() &&
           std::all_of(value.array().begin(), value.array().end(), [](const Value& item) { return item.is_bool(); });
      break;
    case ParamKind::ArcList:
      ok = value.is_array() && std::all_of(value.array().begin(), value.array().end(), [&](const Value& row) {
             return numbers(row) && row.array().size() == spec.row_width && is_call_integer(row.array()[0]) &&
                    is_call_integer(row.array()[1]);
           });
      break;
  }
  if (!ok) shape_error(spec);
}

inline std::vector<double> to_numbers(const Value& value) {
  std::vector<double> out;
  for (const Value& item : value.array()) out.push_back(item.number());
  return out;
}

inline Matrix to_matrix(const Value& value) {
  Matrix out;
  for (const Value& row : value.array()) out.push_back(to_numbers(row));
  return out;
}

inline int to_int(const Value& value) { return static_cast<int>(std::lround(value.number())); }

inline int node_count_arg(const Value& value) {
  const int n = to_int(value);
  if (n > kMaxCallNodes) throw CallSchemaError("parameter num_nodes exceeds " + std::to_string(kMaxCallNodes));
  return n;
}

inline Value numbers_value(const std::vector<double>& values) {
  Value::Array items;
  for (double v : values) items.emplace_back(v);
  return Value(std::move(items));
}

inline Value matrix_value(const Matrix& matrix) {
  Value::Array rows;
  for (const auto& row : matrix) rows.push_back(numbers_value(row));
  return Value(std::move(rows));
}

}  // namespace detail

// Checks the call against its schema and converts the arguments into the
// matching instance. Instance invariants are not checked here (solve does
// that). Throws CallSchemaError.
inline ProblemInstance call_to_instance(const ToolCall& call, const ToolRegistry& registry = builtin_registry()) {
  const ToolSchema* schema = registry.find(call.name);
  if (!schema) throw CallSchemaError("unknown tool " + call.name);
  for (const auto& [name, value] : call.args) {
    const ParamSpec* spec = schema->find_parameter(name);
    if (!spec) throw CallSchemaError("unexpected parameter " + name);
    detail::check_shape(*spec, value);
  }
  for (const ParamSpec& spec : schema->parameters) {
    if (spec.required && !call.find(spec.name)) throw CallSchemaError("missing parameter " + spec.name);
  }
  auto arg = [&](const char* name) -> const Value& { return *call.find(name); };

  ProblemInstance instance;
  instance.type = schema->problem_type;
  switch (schema->problem_type) {
    case ProblemType::LP:
    case ProblemType::IP:
    case ProblemType::MILP: {
      LpInstance lp;
      lp.direction = *parse_direction(arg("objective").string());
      lp.objective = detail::to_numbers(arg("c"));
      lp.matrix = detail::to_matrix(arg("A"));
      for (const Value& s : arg("senses").array()) lp.senses.push_back(*parse_sense(s.string()));
      lp.rhs = detail::to_numbers(arg("b"));
      if (const Value* lower = call.find("lower")) lp.lower_bounds = detail::to_numbers(*lower);
      if (const Value* upper = call.find("upper")) {
        for (const Value& u : upper->array()) lp.upper_bounds.push_back(u.is_number() ? u.number() : kInfinity);
      }
      const std::size_t n = lp.objective.size();
      if (schema->problem_type == ProblemType::MILP) {
        for (const Value& flag : arg("integer").array()) lp.integrality.push_back(flag.boolean());
      } else {
        lp.integrality.assign(n, schema->problem_type == ProblemType::IP);
      }
      // Omitted bound vectors take their defaults; present ones keep their
      // length so mismatches surface as validation errors.
      if (!call.find("lower")) lp.lower_bounds.assign(n, 0.0);
      if (!call.find("upper")) lp.upper_bounds.assign(n, kInfinity);
      instance.data = std::move(lp);
      break;
    }
    case ProblemType::TSP: {
      TspInstance tsp;
      tsp.dist = detail::to_matrix(arg("dist"));
      bool symmetric = true;
      for (std::size_t i = 0; i < tsp.dist.size() && symmetric; ++i) {
        for (std::size_t j = 0; j < tsp.dist[i].size(); ++j) {
          if (j >= tsp.dist.size() || i >= tsp.dist[j].size() || tsp.dist[i][j] != tsp.dist[j][i]) {
            symmetric = false;
            break;
          }
        }
      }
      tsp.symmetric = symmetric;
      instance.data = std::move(tsp);
      break;
    }
    case ProblemType::MF: {
      MaxFlowInstance mf;
      mf.node_count = detail::node_count_arg(arg("num_nodes"));
      for (const Value& row : arg("arcs").array()) {
        mf.arcs.push_back({detail::to_int(row.array()[0]), detail::to_int(row.array()[1]), row.array()[2].number()});
      }
      mf.source = detail::to_int(arg("source"));
      mf.sink = detail::to_int(arg("sink"));
      instance.data = std::move(mf);
      break;
    }
    case ProblemType::AP: {
      AssignmentInstance ap;
      ap.direction = *parse_direction(arg("objective").string());
      ap.cost = detail::to_matrix(arg("cost"));
      instance.data = std::move(ap);
      break;
    }
    case ProblemType::MCF: {
      MinCostFlowInstance mcf;
      mcf.node_count = detail::node_count_arg(arg("num_nodes"));
      for (const Value& row : arg("arcs").array()) {
        mcf.arcs.push_back({detail::to_int(row.array()[0]), detail::to_int(row.array()[1]), row.array()[2].number(),
                            row.array()[3].number()});
      }
      mcf.supplies = detail::to_numbers(arg("supplies"));
      instance.data = std::move(mcf);
      break;
    }
  }
  return instance;
}

// Executes a call. Never throws: schema, conversion and validation failures
// come back as status error.
inline SolverResult dispatch(const ToolCall& call, const SolverConfig& config = {},
                             const ToolRegistry& registry = builtin_registry()) {
  try {
    return solve(call_to_instance(call, registry), config);
  } catch (const CallSchemaError& e) {
    return SolverResult::error(e.what());
  } catch (const std::exception& e) {
    return SolverResult::error(std::string("dispatch failed: ") + e.what());
  }
}

// The call that a correct answer for `instance` would make. Optional LP bound
// vectors are emitted only when they differ from the defaults.
inline ToolCall instance_to_call(const ProblemInstance& instance, const ToolRegistry& registry = builtin_registry()) {
  ToolCall call;
  call.name = registry.for_type(instance.type).name;
  std::visit(
      [&](const auto& data) {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, LpInstance>) {
          call.args.emplace_back("objective", Value(std::string(to_string(data.direction))));
          call.args.emplace_back("c", detail::numbers_value(data.objective));
          call.args.emplace_back("A", detail::matrix_value(data.matrix));
          Value::Array senses;
          for (Sense s : data.senses) senses.emplace_back(std::string(to_string(s)));
          call.args.emplace_back("senses", Value(std::move(senses)));
          call.args.emplace_back("b", detail::numbers_value(data.rhs));
          if (instance.type == ProblemType::MILP) {
            Value::Array flags;
            for (bool flag : data.integrality) flags.emplace_back(flag);
            call.args.emplace_back("integer", Value(std::move(flags)));
          }
          if (std::any_of(data.lower_bounds.begin(), data.lower_bounds.end(), [](double v) { return v != 0.0; })) {
            call.args.emplace_back("lower", detail::numbers_value(data.lower_bounds));
          }
          if (std::any_of(data.upper_bounds.begin(), data.upper_bounds.end(),
                          [](double v) { return v != kInfinity; })) {
            Value::Array upper;
            for (double v : data.upper_bounds) {
              upper.push_back(v == kInfinity ? Value(std::string(kInfinitySentinel)) : Value(v));
            }
            call.args.emplace_back("upper", Value(std::move(upper)));
          }
        } else if constexpr (std::is_same_v<T, TspInstance>) {
          call.args.emplace_back("dist", detail::matrix_value(data.dist));
        } else if constexpr (std::is_same_v<T, MaxFlowInstance>) {
          call.args.emplace_back("num_nodes", Value(data.node_count));
          Value::Array arcs;
          for (const FlowArc& a : data.arcs) arcs.push_back(Value(Value::Array{a.from, a.to, a.capacity}));
          call.args.emplace_back("arcs", Value(std::move(arcs)));
          call.args.emplace_back("source", Value(data.source));
          call.args.emplace_back("sink", Value(data.sink));
        } else if constexpr (std::is_same_v<T, AssignmentInstance>) {
          call.args.emplace_back("objective", Value(std::string(to_string(data.direction))));
          call.args.emplace_back("cost", detail::matrix_value(data.cost));
        } else {
          call.args.emplace_back("num_nodes", Value(data.node_count));
          Value::Array arcs;
          for (const CostArc& a : data.arcs) {
            arcs.push_back(Value(Value::Array{a.from, a.to, a.capacity, a.unit_cost}));
          }
          call.args.emplace_back("arcs", Value(std::move(arcs)));
          call.args.emplace_back("supplies", detail::numbers_value(data.supplies));
        }
      },
      instance.data);
  return call;
}

inline ToolCall ground_truth_call(const KeyInfo& info, const ToolRegistry& registry = builtin_registry()) {
  return instance_to_call(info.instance, registry);
}

}  // namespace opsynth
