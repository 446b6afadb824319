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

#include <cmath>
#include <string>
#include <vector>

#include "opsynth/solvers/simplex.hpp"

namespace opsynth {

// Exact LP-based branch-and-bound for problems with integer-flagged variables.
//
// Depth-first; branches on the most fractional integer variable (lowest index
// on ties) and explores the floor branch first. A node is pruned when its
// relaxation cannot strictly beat the incumbent. An unbounded root relaxation
// is reported as unbounded.
inline SolverResult solve_milp(const LpInstance& input, const SolverConfig& config = {}) {
  LpInstance lp = input;
  lp.fill_defaults();
  const std::size_t n = lp.num_variables();
  const double sign = lp.direction == ObjectiveDirection::Maximize ? 1.0 : -1.0;

  struct Node {
    std::vector<double> lower;
    std::vector<double> upper;
  };
  Node root{lp.lower_bounds, lp.upper_bounds};
  for (std::size_t j = 0; j < n; ++j) {
    if (!lp.integrality[j]) continue;
    root.lower[j] = std::ceil(root.lower[j] - kIntegralityTolerance);
    if (root.upper[j] != kInfinity) root.upper[j] = std::floor(root.upper[j] + kIntegralityTolerance);
    if (root.lower[j] > root.upper[j]) return SolverResult::infeasible();
  }

  std::vector<Node> stack;
  stack.push_back(std::move(root));
  bool have_incumbent = false;
  double incumbent_value = 0.0;  // in maximization sense
  std::vector<double> incumbent;
  long nodes = 0;

  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (++nodes > config.max_bnb_nodes) {
      return SolverResult::error("branch-and-bound node limit (" + std::to_string(config.max_bnb_nodes) +
                                 ") exceeded");
    }
    LpOutcome relaxed = solve_lp_relaxation(lp, node.lower, node.upper, config);
    if (relaxed.status == SolveStatus::Infeasible) continue;
    if (relaxed.status == SolveStatus::Unbounded) return SolverResult::unbounded();
    if (relaxed.status == SolveStatus::Error) return SolverResult::error(relaxed.message);

    const double bound = sign * relaxed.objective;
    if (have_incumbent && bound <= incumbent_value + 1e-9 * std::max(1.0, std::abs(incumbent_value))) {
      continue;
    }

    std::size_t branch_var = n;
    double best_fractionality = kIntegralityTolerance;
    for (std::size_t j = 0; j < n; ++j) {
      if (!lp.integrality[j]) continue;
      const double value = relaxed.x[j];
      const double fractionality = std::min(value - std::floor(value), std::ceil(value) - value);
      if (fractionality > best_fractionality) {
        best_fractionality = fractionality;
        branch_var = j;
      }
    }

    if (branch_var == n) {
      std::vector<double> x = relaxed.x;
      double value = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (lp.integrality[j]) x[j] = std::round(x[j]);
        if (x[j] == 0.0) x[j] = 0.0;
        value += lp.objective[j] * x[j];
      }
      if (!have_incumbent || sign * value > incumbent_value) {
        have_incumbent = true;
        incumbent_value = sign * value;
        incumbent = std::move(x);
      }
      continue;
    }

    const double value = relaxed.x[branch_var];
    Node up = node;
    up.lower[branch_var] = std::ceil(value);
    Node down = std::move(node);
    down.upper[branch_var] = std::floor(value);
    stack.push_back(std::move(up));
    stack.push_back(std::move(down));
  }

  if (!have_incumbent) return SolverResult::infeasible();
  double objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) objective += lp.objective[j] * incumbent[j];
  return SolverResult::optimal(objective, variable_assignment(incumbent));
}

}  // namespace opsynth
