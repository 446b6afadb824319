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
#include <optional>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <variant>

#include "opsynth/core/types.hpp"

namespace opsynth {

inline std::string variable_name(std::size_t j) { return "x" + std::to_string(j); }
inline std::string tour_position_name(std::size_t k) { return "pos" + std::to_string(k); }
inline std::string arc_name(std::size_t e) { return "arc" + std::to_string(e); }
inline std::string agent_name(std::size_t i) { return "agent" + std::to_string(i); }

// Objective of `instance` evaluated at `assignment`, or nullopt when the
// assignment lacks an identifier the objective needs or names an invalid
// index (a tour or agent mapping outside [0, n)).
inline std::optional<double> evaluate_objective(const ProblemInstance& instance,
                                                const Assignment& assignment) {
  std::unordered_map<std::string, double> values(assignment.begin(), assignment.end());
  auto get = [&](const std::string& key) -> std::optional<double> {
    auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    return it->second;
  };
  auto get_index = [&](const std::string& key, std::size_t n) -> std::optional<std::size_t> {
    auto v = get(key);
    if (!v || !is_integral(*v, 1e-9) || *v < 0 || *v >= static_cast<double>(n)) return std::nullopt;
    return static_cast<std::size_t>(std::llround(*v));
  };

  return std::visit(
      [&](const auto& data) -> std::optional<double> {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, LpInstance>) {
          double total = 0.0;
          for (std::size_t j = 0; j < data.objective.size(); ++j) {
            auto x = get(variable_name(j));
            if (!x) return std::nullopt;
            total += data.objective[j] * *x;
          }
          return total;
        } else if constexpr (std::is_same_v<T, TspInstance>) {
          const std::size_t n = data.size();
          double total = 0.0;
          for (std::size_t k = 0; k < n; ++k) {
            auto from = get_index(tour_position_name(k), n);
            auto to = get_index(tour_position_name((k + 1) % n), n);
            if (!from || !to) return std::nullopt;
            total += data.dist[*from][*to];
          }
          return total;
        } else if constexpr (std::is_same_v<T, MaxFlowInstance>) {
          double net = 0.0;
          for (std::size_t e = 0; e < data.arcs.size(); ++e) {
            auto f = get(arc_name(e));
            if (!f) return std::nullopt;
            if (data.arcs[e].from == data.source) net += *f;
            if (data.arcs[e].to == data.source) net -= *f;
          }
          return net;
        } else if constexpr (std::is_same_v<T, AssignmentInstance>) {
          double total = 0.0;
          for (std::size_t i = 0; i < data.size(); ++i) {
            auto task = get_index(agent_name(i), data.size());
            if (!task) return std::nullopt;
            total += data.cost[i][*task];
          }
          return total;
        } else {
          double total = 0.0;
          for (std::size_t e = 0; e < data.arcs.size(); ++e) {
            auto f = get(arc_name(e));
            if (!f) return std::nullopt;
            total += data.arcs[e].unit_cost * *f;
          }
          return total;
        }
      },
      instance.data);
}

}  // namespace opsynth
