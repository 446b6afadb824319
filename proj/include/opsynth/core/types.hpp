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

// Domain types shared by every opsynth module: the seven problem
// parameterizations, solver results and the sampled "key information"
// record that drives dataset synthesis.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace opsynth {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Integrality test used by every solver and by schema checking of numeric
// arguments in integer slots.
inline constexpr double kIntegralityTolerance = 1e-6;

inline bool is_integral(double value, double tolerance = kIntegralityTolerance) {
  return std::isfinite(value) && std::abs(value - std::round(value)) <= tolerance;
}

// Objective consistency tolerance: max(1e-6, 1e-6 * |objective|).
inline double objective_tolerance(double objective) {
  return std::max(1e-6, 1e-6 * std::abs(objective));
}

inline bool objectives_match(double expected, double actual) {
  return std::abs(expected - actual) <= objective_tolerance(expected);
}

enum class ProblemType { LP, IP, MILP, TSP, MF, AP, MCF };

inline constexpr std::array<ProblemType, 7> kAllProblemTypes = {
    ProblemType::LP, ProblemType::IP, ProblemType::MILP, ProblemType::TSP,
    ProblemType::MF, ProblemType::AP, ProblemType::MCF};

inline constexpr std::string_view to_string(ProblemType type) {
  switch (type) {
    case ProblemType::LP: return "LP";
    case ProblemType::IP: return "IP";
    case ProblemType::MILP: return "MILP";
    case ProblemType::TSP: return "TSP";
    case ProblemType::MF: return "MF";
    case ProblemType::AP: return "AP";
    case ProblemType::MCF: return "MCF";
  }
  return "?";
}

inline std::optional<ProblemType> parse_problem_type(std::string_view name) {
  for (ProblemType type : kAllProblemTypes) {
    if (to_string(type) == name) return type;
  }
  return std::nullopt;
}

inline constexpr std::size_t ordinal(ProblemType type) {
  return static_cast<std::size_t>(type);
}

inline constexpr bool is_linear_family(ProblemType type) {
  return type == ProblemType::LP || type == ProblemType::IP || type == ProblemType::MILP;
}

enum class ObjectiveDirection { Maximize, Minimize };

inline constexpr std::string_view to_string(ObjectiveDirection direction) {
  return direction == ObjectiveDirection::Maximize ? "max" : "min";
}

inline std::optional<ObjectiveDirection> parse_direction(std::string_view text) {
  if (text == "max" || text == "maximize") return ObjectiveDirection::Maximize;
  if (text == "min" || text == "minimize") return ObjectiveDirection::Minimize;
  return std::nullopt;
}

enum class Sense { LessEqual, GreaterEqual, Equal };

inline constexpr std::string_view to_string(Sense sense) {
  switch (sense) {
    case Sense::LessEqual: return "<=";
    case Sense::GreaterEqual: return ">=";
    case Sense::Equal: return "=";
  }
  return "?";
}

inline std::optional<Sense> parse_sense(std::string_view text) {
  if (text == "<=" || text == "≤") return Sense::LessEqual;
  if (text == ">=" || text == "≥") return Sense::GreaterEqual;
  if (text == "=" || text == "==") return Sense::Equal;
  return std::nullopt;
}

using Matrix = std::vector<std::vector<double>>;

// Shared parameterization of LP, IP and MILP. The declared problem type of the
// enclosing ProblemInstance must agree with the integrality flags.
struct LpInstance {
  ObjectiveDirection direction = ObjectiveDirection::Maximize;
  std::vector<double> objective;  // c, length n
  Matrix matrix;                  // A, m rows of length n
  std::vector<Sense> senses;      // length m
  std::vector<double> rhs;        // b, length m
  std::vector<double> lower_bounds;
  std::vector<double> upper_bounds;  // kInfinity when unbounded
  std::vector<bool> integrality;

  std::size_t num_variables() const { return objective.size(); }
  std::size_t num_constraints() const { return matrix.size(); }

  // Fills default bounds [0, inf) and continuous flags for any empty vector.
  void fill_defaults() {
    const std::size_t n = objective.size();
    if (lower_bounds.empty()) lower_bounds.assign(n, 0.0);
    if (upper_bounds.empty()) upper_bounds.assign(n, kInfinity);
    if (integrality.empty()) integrality.assign(n, false);
  }

  bool operator==(const LpInstance&) const = default;
};

struct TspInstance {
  Matrix dist;
  bool symmetric = true;

  std::size_t size() const { return dist.size(); }
  bool operator==(const TspInstance&) const = default;
};

struct FlowArc {
  int from = 0;
  int to = 0;
  double capacity = 0.0;
  bool operator==(const FlowArc&) const = default;
};

struct MaxFlowInstance {
  int node_count = 0;
  std::vector<FlowArc> arcs;
  int source = 0;
  int sink = 0;
  bool operator==(const MaxFlowInstance&) const = default;
};

struct AssignmentInstance {
  ObjectiveDirection direction = ObjectiveDirection::Minimize;
  Matrix cost;

  std::size_t size() const { return cost.size(); }
  bool operator==(const AssignmentInstance&) const = default;
};

struct CostArc {
  int from = 0;
  int to = 0;
  double capacity = 0.0;
  double unit_cost = 0.0;
  bool operator==(const CostArc&) const = default;
};

struct MinCostFlowInstance {
  int node_count = 0;
  std::vector<CostArc> arcs;
  std::vector<double> supplies;  // positive = supply, negative = demand
  bool operator==(const MinCostFlowInstance&) const = default;
};

using InstanceData = std::variant<LpInstance, TspInstance, MaxFlowInstance,
                                  AssignmentInstance, MinCostFlowInstance>;

struct ProblemInstance {
  ProblemType type = ProblemType::LP;
  InstanceData data;

  bool operator==(const ProblemInstance&) const = default;
};

// Ordered (identifier, value) pairs; identifiers are stable per problem type:
// x<j> for LP-family variables, pos<k> for the city visited k-th on a tour,
// arc<e> for per-arc flows and agent<i> for the task given to agent i.
using Assignment = std::vector<std::pair<std::string, double>>;

enum class SolveStatus { Optimal, Infeasible, Unbounded, Error };

inline constexpr std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::Error: return "error";
  }
  return "?";
}

inline std::optional<SolveStatus> parse_solve_status(std::string_view text) {
  for (auto status : {SolveStatus::Optimal, SolveStatus::Infeasible,
                      SolveStatus::Unbounded, SolveStatus::Error}) {
    if (to_string(status) == text) return status;
  }
  return std::nullopt;
}

// Exactly the fields implied by `status` are engaged; use the factories.
struct SolverResult {
  SolveStatus status = SolveStatus::Error;
  std::optional<double> objective;
  std::optional<Assignment> assignment;
  std::optional<std::string> message;

  static SolverResult optimal(double objective, Assignment assignment) {
    return {SolveStatus::Optimal, objective, std::move(assignment), std::nullopt};
  }
  static SolverResult infeasible() { return {SolveStatus::Infeasible, {}, {}, {}}; }
  static SolverResult unbounded() { return {SolveStatus::Unbounded, {}, {}, {}}; }
  static SolverResult error(std::string message) {
    return {SolveStatus::Error, {}, {}, std::move(message)};
  }

  bool is_optimal() const { return status == SolveStatus::Optimal; }
  bool operator==(const SolverResult&) const = default;
};

enum class RenderFormat { FreeText, Matrix, Tabular };

inline constexpr std::array<RenderFormat, 3> kAllRenderFormats = {
    RenderFormat::FreeText, RenderFormat::Matrix, RenderFormat::Tabular};

inline constexpr std::string_view to_string(RenderFormat format) {
  switch (format) {
    case RenderFormat::FreeText: return "free_text";
    case RenderFormat::Matrix: return "matrix";
    case RenderFormat::Tabular: return "tabular";
  }
  return "?";
}

inline std::optional<RenderFormat> parse_render_format(std::string_view text) {
  for (RenderFormat format : kAllRenderFormats) {
    if (to_string(format) == text) return format;
  }
  return std::nullopt;
}

// The sampled parameters plus their narrative framing. ground_truth is always
// optimal; the sampler discards anything else.
struct KeyInfo {
  ProblemInstance instance;
  std::string context;           // industry label, e.g. "agriculture"
  std::string objective_flavor;  // e.g. "profit maximization"
  RenderFormat render_format = RenderFormat::FreeText;
  SolverResult ground_truth;

  ProblemType type() const { return instance.type; }
  bool operator==(const KeyInfo&) const = default;
};

}  // namespace opsynth
