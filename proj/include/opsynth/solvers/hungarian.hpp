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

#include <limits>
#include <vector>

#include "opsynth/core/objective.hpp"
#include "opsynth/core/types.hpp"

namespace opsynth {

// Hungarian method with row/column potentials, O(n^3). Maximization runs on
// the negated matrix; the reported objective is summed from the original
// entries.
inline SolverResult solve_assignment(const AssignmentInstance& ap) {
  const std::size_t n = ap.size();
  const double sign = ap.direction == ObjectiveDirection::Maximize ? -1.0 : 1.0;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // 1-based potentials; column 0 is the virtual start column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_slack(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t row0 = match[col0];
      double delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double reduced = sign * ap.cost[row0 - 1][col - 1] - u[row0] - v[col];
        if (reduced < min_slack[col]) {
          min_slack[col] = reduced;
          way[col] = col0;
        }
        if (min_slack[col] < delta) {
          delta = min_slack[col];
          col1 = col;
        }
      }
      for (std::size_t col = 0; col <= n; ++col) {
        if (used[col]) {
          u[match[col]] += delta;
          v[col] -= delta;
        } else {
          min_slack[col] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<std::size_t> task_of(n, 0);
  for (std::size_t col = 1; col <= n; ++col) task_of[match[col] - 1] = col - 1;
  Assignment assignment;
  double objective = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    assignment.emplace_back(agent_name(i), static_cast<double>(task_of[i]));
    objective += ap.cost[i][task_of[i]];
  }
  return SolverResult::optimal(objective, std::move(assignment));
}

}  // namespace opsynth
