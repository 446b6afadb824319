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

#include <algorithm>
#include <string>
#include <type_traits>
#include <variant>

#include "opsynth/core/validate.hpp"
#include "opsynth/solvers/branch_and_bound.hpp"
#include "opsynth/solvers/held_karp.hpp"
#include "opsynth/solvers/hungarian.hpp"
#include "opsynth/solvers/max_flow.hpp"
#include "opsynth/solvers/min_cost_flow.hpp"
#include "opsynth/solvers/simplex.hpp"

namespace opsynth {

// Validates, then routes to the type-appropriate exact solver. LP-family
// instances go to branch-and-bound iff any variable is integer-flagged.
inline SolverResult solve(const ProblemInstance& instance, const SolverConfig& config = {}) {
  auto violations = validate_instance(instance);
  if (!violations.empty()) {
    std::string message = "invalid instance: " + violations.front();
    for (std::size_t i = 1; i < violations.size(); ++i) message += "; " + violations[i];
    return SolverResult::error(message);
  }
  return std::visit(
      [&](const auto& data) -> SolverResult {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, LpInstance>) {
          const bool has_integer = std::any_of(data.integrality.begin(), data.integrality.end(),
                                               [](bool flag) { return flag; });
          return has_integer ? solve_milp(data, config) : solve_lp(data, config);
        } else if constexpr (std::is_same_v<T, TspInstance>) {
          return solve_tsp(data, config);
        } else if constexpr (std::is_same_v<T, MaxFlowInstance>) {
          return solve_max_flow(data);
        } else if constexpr (std::is_same_v<T, AssignmentInstance>) {
          return solve_assignment(data);
        } else {
          return solve_min_cost_flow(data);
        }
      },
      instance.data);
}

}  // namespace opsynth
