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

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "opsynth/core/objective.hpp"
#include "opsynth/core/types.hpp"
#include "opsynth/solvers/config.hpp"

namespace opsynth {

// Exact TSP by the Held-Karp subset dynamic program, O(2^n n^2). The tour is
// rooted at city 0; among equal-cost predecessors the lowest index wins, so
// the returned permutation is deterministic.
inline SolverResult solve_tsp(const TspInstance& tsp, const SolverConfig& config = {}) {
  const std::size_t n = tsp.size();
  if (n > static_cast<std::size_t>(config.tsp_exact_city_cap)) {
    return SolverResult::error("TSP with " + std::to_string(n) + " cities exceeds the exact solver cap of " +
                               std::to_string(config.tsp_exact_city_cap));
  }
  if (n < 2) {
    Assignment tour;
    for (std::size_t k = 0; k < n; ++k) tour.emplace_back(tour_position_name(k), static_cast<double>(k));
    return SolverResult::optimal(0.0, std::move(tour));
  }

  const std::size_t m = n - 1;  // cities 1..n-1 are bits 0..m-1
  const std::size_t states = std::size_t{1} << m;
  constexpr double kUnset = std::numeric_limits<double>::infinity();
  std::vector<double> cost(states * m, kUnset);
  std::vector<std::int8_t> parent(states * m, -1);
  const auto& d = tsp.dist;

  for (std::size_t j = 0; j < m; ++j) cost[(std::size_t{1} << j) * m + j] = d[0][j + 1];
  for (std::size_t mask = 1; mask < states; ++mask) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      const double base = cost[mask * m + j];
      if (base == kUnset) continue;
      for (std::size_t k = 0; k < m; ++k) {
        if (mask & (std::size_t{1} << k)) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        const double candidate = base + d[j + 1][k + 1];
        if (candidate < cost[next * m + k]) {
          cost[next * m + k] = candidate;
          parent[next * m + k] = static_cast<std::int8_t>(j);
        }
      }
    }
  }

  const std::size_t full = states - 1;
  std::size_t last = 0;
  double best = kUnset;
  for (std::size_t j = 0; j < m; ++j) {
    const double candidate = cost[full * m + j] + d[j + 1][0];
    if (candidate < best) {
      best = candidate;
      last = j;
    }
  }

  std::vector<std::size_t> reversed;
  std::size_t mask = full;
  std::size_t city = last;
  while (true) {
    reversed.push_back(city + 1);
    const std::int8_t prev = parent[mask * m + city];
    mask &= ~(std::size_t{1} << city);
    if (prev < 0) break;
    city = static_cast<std::size_t>(prev);
  }
  Assignment tour;
  tour.emplace_back(tour_position_name(0), 0.0);
  for (std::size_t k = reversed.size(); k-- > 0;) {
    tour.emplace_back(tour_position_name(tour.size()), static_cast<double>(reversed[k]));
  }

  double objective = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto from = static_cast<std::size_t>(tour[k].second);
    const auto to = static_cast<std::size_t>(tour[(k + 1) % n].second);
    objective += d[from][to];
  }
  return SolverResult::optimal(objective, std::move(tour));
}

}  // namespace opsynth
