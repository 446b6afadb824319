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

#include <string>
#include <vector>

namespace opsynth {

struct SolverConfig {
  // Per LP solve (both simplex phases together).
  long max_simplex_iterations = 100000;
  long max_bnb_nodes = 200000;
  int tsp_exact_city_cap = 12;
  double feasibility_tolerance = 1e-7;

  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    if (max_simplex_iterations <= 0) out.push_back("max_simplex_iterations must be positive");
    if (max_bnb_nodes <= 0) out.push_back("max_bnb_nodes must be positive");
    if (tsp_exact_city_cap <= 0) out.push_back("tsp_exact_city_cap must be positive");
    if (tsp_exact_city_cap > 20) out.push_back("tsp_exact_city_cap above 20 is not tractable for Held-Karp");
    if (!(feasibility_tolerance > 0)) out.push_back("feasibility_tolerance must be positive");
    return out;
  }

  bool operator==(const SolverConfig&) const = default;
};

}  // namespace opsynth
