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
#include <type_traits>
#include <variant>
#include <vector>

#include "opsynth/core/number_format.hpp"
#include "opsynth/core/types.hpp"

namespace opsynth {

namespace detail {

inline std::string index_text(std::size_t i) { return std::to_string(i); }

inline void validate_lp(const LpInstance& lp, ProblemType type, std::vector<std::string>& out) {
  const std::size_t n = lp.objective.size();
  const std::size_t m = lp.matrix.size();
  if (n == 0) out.push_back("c must have at least one variable");
  if (m == 0) out.push_back("A must have at least one constraint row");
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.matrix[i].size() != n) {
      out.push_back("A row " + index_text(i) + " has length " +
                    index_text(lp.matrix[i].size()) + ", expected " + index_text(n) +
                    " (length of c)");
    }
  }
  if (lp.senses.size() != m) {
    out.push_back("senses has length " + index_text(lp.senses.size()) + ", expected " +
                  index_text(m) + " (rows of A)");
  }
  if (lp.rhs.size() != m) {
    out.push_back("b has length " + index_text(lp.rhs.size()) + ", expected " +
                  index_text(m) + " (rows of A)");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lp.objective[j])) out.push_back("c[" + index_text(j) + "] must be finite");
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < lp.matrix[i].size(); ++j) {
      if (!std::isfinite(lp.matrix[i][j])) {
        out.push_back("A[" + index_text(i) + "][" + index_text(j) + "] must be finite");
      }
    }
  }
  for (std::size_t i = 0; i < lp.rhs.size(); ++i) {
    if (!std::isfinite(lp.rhs[i])) out.push_back("b[" + index_text(i) + "] must be finite");
  }
  if (lp.lower_bounds.size() != n) {
    out.push_back("lower_bounds has length " + index_text(lp.lower_bounds.size()) +
                  ", expected " + index_text(n));
  }
  if (lp.upper_bounds.size() != n) {
    out.push_back("upper_bounds has length " + index_text(lp.upper_bounds.size()) +
                  ", expected " + index_text(n));
  }
  if (lp.integrality.size() != n) {
    out.push_back("integrality has length " + index_text(lp.integrality.size()) +
                  ", expected " + index_text(n));
  }
  const std::size_t bounded = std::min({n, lp.lower_bounds.size(), lp.upper_bounds.size()});
  for (std::size_t j = 0; j < bounded; ++j) {
    const double lo = lp.lower_bounds[j];
    const double hi = lp.upper_bounds[j];
    if (!std::isfinite(lo)) out.push_back("lower_bounds[" + index_text(j) + "] must be finite");
    if (std::isnan(hi) || hi == -kInfinity) {
      out.push_back("upper_bounds[" + index_text(j) + "] must be a number or +infinity");
    }
    if (lo > hi) {
      out.push_back("lower_bounds[" + index_text(j) + "] = " + format_number(lo) +
                    " exceeds upper_bounds[" + index_text(j) + "] = " + format_number(hi));
    }
  }
  if (lp.integrality.size() == n && n > 0) {
    std::size_t integral = 0;
    for (bool flag : lp.integrality) integral += flag ? 1 : 0;
    switch (type) {
      case ProblemType::LP:
        if (integral != 0) out.push_back("integrality: LP instances must have no integer variables");
        break;
      case ProblemType::IP:
        if (integral != n) out.push_back("integrality: IP instances must have all variables integer");
        break;
      case ProblemType::MILP:
        if (integral == 0 || integral == n) {
          out.push_back("integrality: MILP instances need at least one integer and one continuous variable");
        }
        break;
      default:
        break;
    }
  }
}

inline void validate_square(const Matrix& matrix, const std::string& field,
                            std::vector<std::string>& out) {
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (matrix[i].size() != matrix.size()) {
      out.push_back(field + " row " + index_text(i) + " has length " +
                    index_text(matrix[i].size()) + ", expected " + index_text(matrix.size()) +
                    " (matrix must be square)");
    }
  }
}

inline void validate_tsp(const TspInstance& tsp, std::vector<std::string>& out) {
  const std::size_t n = tsp.dist.size();
  if (n < 3) out.push_back("dist must cover at least 3 cities, got " + index_text(n));
  validate_square(tsp.dist, "dist", out);
  bool asymmetric_reported = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < tsp.dist[i].size(); ++j) {
      const double d = tsp.dist[i][j];
      if (!std::isfinite(d) || d < 0) {
        out.push_back("dist[" + index_text(i) + "][" + index_text(j) +
                      "] must be finite and nonnegative");
      }
      if (i == j && d != 0.0) {
        out.push_back("diagonal must be zero: dist[" + index_text(i) + "][" + index_text(i) +
                      "] = " + format_number(d));
      }
      if (tsp.symmetric && !asymmetric_reported && j < n && i < tsp.dist[j].size() &&
          tsp.dist[j][i] != d) {
        out.push_back("symmetric is true but dist[" + index_text(i) + "][" + index_text(j) +
                      "] != dist[" + index_text(j) + "][" + index_text(i) + "]");
        asymmetric_reported = true;
      }
    }
  }
}

inline void validate_node(int node, int node_count, const std::string& field,
                          std::vector<std::string>& out) {
  if (node < 0 || node >= node_count) {
    out.push_back(field + " = " + std::to_string(node) + " is out of range [0, " +
                  std::to_string(node_count) + ")");
  }
}

inline void validate_max_flow(const MaxFlowInstance& mf, std::vector<std::string>& out) {
  if (mf.node_count < 2) out.push_back("node_count must be at least 2");
  validate_node(mf.source, mf.node_count, "source", out);
  validate_node(mf.sink, mf.node_count, "sink", out);
  if (mf.source == mf.sink) out.push_back("source and sink must differ");
  for (std::size_t e = 0; e < mf.arcs.size(); ++e) {
    const FlowArc& arc = mf.arcs[e];
    validate_node(arc.from, mf.node_count, "arcs[" + index_text(e) + "].from", out);
    validate_node(arc.to, mf.node_count, "arcs[" + index_text(e) + "].to", out);
    if (!std::isfinite(arc.capacity) || arc.capacity < 0) {
      out.push_back("arcs[" + index_text(e) + "].capacity must be finite and nonnegative");
    }
  }
}

inline void validate_assignment(const AssignmentInstance& ap, std::vector<std::string>& out) {
  if (ap.cost.empty()) out.push_back("cost must have at least one row");
  validate_square(ap.cost, "cost", out);
  for (std::size_t i = 0; i < ap.cost.size(); ++i) {
    for (std::size_t j = 0; j < ap.cost[i].size(); ++j) {
      if (!std::isfinite(ap.cost[i][j])) {
        out.push_back("cost[" + index_text(i) + "][" + index_text(j) + "] must be finite");
      }
    }
  }
}

inline void validate_min_cost_flow(const MinCostFlowInstance& mcf, std::vector<std::string>& out) {
  if (mcf.node_count < 1) out.push_back("node_count must be at least 1");
  for (std::size_t e = 0; e < mcf.arcs.size(); ++e) {
    const CostArc& arc = mcf.arcs[e];
    validate_node(arc.from, mcf.node_count, "arcs[" + index_text(e) + "].from", out);
    validate_node(arc.to, mcf.node_count, "arcs[" + index_text(e) + "].to", out);
    if (!std::isfinite(arc.capacity) || arc.capacity < 0) {
      out.push_back("arcs[" + index_text(e) + "].capacity must be finite and nonnegative");
    }
    if (!std::isfinite(arc.unit_cost)) {
      out.push_back("arcs[" + index_text(e) + "].unit_cost must be finite");
    }
  }
  if (mcf.supplies.size() != static_cast<std::size_t>(std::max(mcf.node_count, 0))) {
    out.push_back("supplies has length " + index_text(mcf.supplies.size()) + ", expected " +
                  std::to_string(mcf.node_count) + " (node_count)");
  }
  double sum = 0.0;
  double magnitude = 0.0;
  bool finite = true;
  for (double s : mcf.supplies) {
    finite = finite && std::isfinite(s);
    sum += s;
    magnitude += std::abs(s);
  }
  if (!finite) {
    out.push_back("supplies must be finite");
  } else if (std::abs(sum) > 1e-9 * std::max(1.0, magnitude)) {
    out.push_back("supplies must sum to 0 (sum is " + format_number(sum) + ")");
  }
}

}  // namespace detail

// Returns one human-readable description per broken invariant; empty when the
// instance is well formed. Violations are data, never exceptions.
inline std::vector<std::string> validate_instance(const ProblemInstance& instance) {
  std::vector<std::string> out;
  std::visit(
      [&](const auto& data) {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, LpInstance>) {
          if (!is_linear_family(instance.type)) {
            out.push_back("type " + std::string(to_string(instance.type)) +
                          " does not use the linear program parameterization");
          }
          detail::validate_lp(data, instance.type, out);
        } else if constexpr (std::is_same_v<T, TspInstance>) {
          if (instance.type != ProblemType::TSP) out.push_back("type must be TSP for a distance matrix");
          detail::validate_tsp(data, out);
        } else if constexpr (std::is_same_v<T, MaxFlowInstance>) {
          if (instance.type != ProblemType::MF) out.push_back("type must be MF for a max-flow network");
          detail::validate_max_flow(data, out);
        } else if constexpr (std::is_same_v<T, AssignmentInstance>) {
          if (instance.type != ProblemType::AP) out.push_back("type must be AP for a cost matrix");
          detail::validate_assignment(data, out);
        } else {
          if (instance.type != ProblemType::MCF) out.push_back("type must be MCF for a min-cost-flow network");
          detail::validate_min_cost_flow(data, out);
        }
      },
      instance.data);
  return out;
}

}  // namespace opsynth
