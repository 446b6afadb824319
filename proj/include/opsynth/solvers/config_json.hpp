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

#include "opsynth/core/json_io.hpp"
#include "opsynth/solvers/config.hpp"

namespace opsynth {

inline Json solver_config_to_json(const SolverConfig& config) {
  return {{"max_simplex_iterations", config.max_simplex_iterations},
          {"max_bnb_nodes", config.max_bnb_nodes},
          {"tsp_exact_city_cap", config.tsp_exact_city_cap},
          {"feasibility_tolerance", config.feasibility_tolerance}};
}

// Absent keys keep their defaults; unknown keys throw FormatError.
inline SolverConfig solver_config_from_json(const Json& object, const std::string& path = "solver") {
  SolverConfig config;
  if (!object.is_object()) throw FormatError(path, "expected an object");
  for (auto it = object.begin(); it != object.end(); ++it) {
    const std::string p = detail::child(path, it.key());
    if (it.key() == "max_simplex_iterations") {
      config.max_simplex_iterations = detail::as_int(it.value(), p);
    } else if (it.key() == "max_bnb_nodes") {
      config.max_bnb_nodes = detail::as_int(it.value(), p);
    } else if (it.key() == "tsp_exact_city_cap") {
      config.tsp_exact_city_cap = detail::as_int(it.value(), p);
    } else if (it.key() == "feasibility_tolerance") {
      config.feasibility_tolerance = detail::as_number(it.value(), p);
    } else {
      throw FormatError(p, "unknown field");
    }
  }
  return config;
}

}  // namespace opsynth
