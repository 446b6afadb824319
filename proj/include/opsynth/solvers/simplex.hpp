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

// Dense two-phase primal simplex.
//
// Variables are shifted to y = x - lower >= 0; finite upper bounds become
// explicit <= rows. Rows with negative right-hand side are negated so every
// artificial starts feasible. Both phases pivot with Bland's rule (lowest
// improving column enters, lowest basic index leaves on ratio ties), which
// guarantees termination without perturbation.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "opsynth/core/objective.hpp"
#include "opsynth/core/types.hpp"
#include "opsynth/solvers/config.hpp"

namespace opsynth {

struct LpOutcome {
  SolveStatus status = SolveStatus::Error;
  std::vector<double> x;  // engaged when optimal
  double objective = 0.0;
  long iterations = 0;
  std::string message;
};

namespace detail {

class SimplexTableau {
 public:
  static constexpr double kPivotTolerance = 1e-9;
  static constexpr double kCostTolerance = 1e-9;

  SimplexTableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t row, std::size_t col) {
    const double p = at(row, col);
    for (std::size_t c = 0; c <= cols_; ++c) at(row, c) /= p;
    at(row, col) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == row) continue;
      const double factor = at(r, col);
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= factor * at(row, c);
      at(r, col) = 0.0;
    }
    basis_[row] = col;
  }

  void erase_row(std::size_t row) {
    data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(row * (cols_ + 1)),
                data_.begin() + static_cast<std::ptrdiff_t>((row + 1) * (cols_ + 1)));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(row));
    --rows_;
  }

  enum class RunStatus { Optimal, Unbounded, IterationLimit };

  // Maximizes cost.x over the current basis; columns >= entering_limit never
  // enter.
  RunStatus maximize(std::span<const double> cost, std::size_t entering_limit, long& iterations,
                     long max_iterations) {
    std::vector<char> is_basic(cols_, 0);
    for (;;) {
      std::fill(is_basic.begin(), is_basic.end(), 0);
      for (std::size_t b : basis_) is_basic[b] = 1;
      std::size_t entering = cols_;
      for (std::size_t j = 0; j < entering_limit; ++j) {
        if (is_basic[j]) continue;
        double reduced = cost[j];
        for (std::size_t r = 0; r < rows_; ++r) reduced -= cost[basis_[r]] * at(r, j);
        if (reduced > kCostTolerance) {
          entering = j;
          break;
        }
      }
      if (entering == cols_) return RunStatus::Optimal;

      std::size_t leaving = rows_;
      double best_ratio = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double coef = at(r, entering);
        if (coef <= kPivotTolerance) continue;
        const double ratio = std::max(rhs(r), 0.0) / coef;
        if (leaving == rows_) {
          leaving = r;
          best_ratio = ratio;
          continue;
        }
        const double slack = 1e-12 * (1.0 + std::abs(best_ratio));
        if (ratio < best_ratio - slack || (ratio <= best_ratio + slack && basis_[r] < basis_[leaving])) {
          leaving = r;
          best_ratio = std::min(ratio, best_ratio);
        }
      }
      if (leaving == rows_) return RunStatus::Unbounded;
      if (++iterations > max_iterations) return RunStatus::IterationLimit;
      pivot(leaving, entering);
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

// Solves the continuous relaxation of `lp` with the given bound vectors
// (integrality flags are ignored). Used directly by branch-and-bound.
inline LpOutcome solve_lp_relaxation(const LpInstance& lp, std::span<const double> lower,
                                     std::span<const double> upper, const SolverConfig& config) {
  using detail::SimplexTableau;
  LpOutcome outcome;
  const std::size_t n = lp.num_variables();

  struct Row {
    std::vector<double> coef;
    Sense sense;
    double rhs;
  };
  std::vector<Row> rows;
  rows.reserve(lp.num_constraints() + n);
  for (std::size_t i = 0; i < lp.num_constraints(); ++i) {
    double shifted = lp.rhs[i];
    for (std::size_t j = 0; j < n; ++j) shifted -= lp.matrix[i][j] * lower[j];
    rows.push_back({lp.matrix[i], lp.senses[i], shifted});
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (upper[j] == kInfinity) continue;
    const double width = upper[j] - lower[j];
    if (width < -config.feasibility_tolerance) {
      outcome.status = SolveStatus::Infeasible;
      return outcome;
    }
    std::vector<double> coef(n, 0.0);
    coef[j] = 1.0;
    rows.push_back({std::move(coef), Sense::LessEqual, std::max(width, 0.0)});
  }
  for (Row& row : rows) {
    if (row.rhs < 0) {
      for (double& a : row.coef) a = -a;
      row.rhs = -row.rhs;
      if (row.sense == Sense::LessEqual) {
        row.sense = Sense::GreaterEqual;
      } else if (row.sense == Sense::GreaterEqual) {
        row.sense = Sense::LessEqual;
      }
    }
  }

  std::size_t slack_count = 0;
  std::size_t artificial_count = 0;
  for (const Row& row : rows) {
    if (row.sense != Sense::Equal) ++slack_count;
    if (row.sense != Sense::LessEqual) ++artificial_count;
  }
  const std::size_t first_slack = n;
  const std::size_t first_artificial = n + slack_count;
  const std::size_t cols = first_artificial + artificial_count;

  SimplexTableau tableau(rows.size(), cols);
  tableau.basis().assign(rows.size(), 0);
  std::size_t next_slack = first_slack;
  std::size_t next_artificial = first_artificial;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t j = 0; j < n; ++j) tableau.at(r, j) = rows[r].coef[j];
    tableau.rhs(r) = rows[r].rhs;
    switch (rows[r].sense) {
      case Sense::LessEqual:
        tableau.at(r, next_slack) = 1.0;
        tableau.basis()[r] = next_slack++;
        break;
      case Sense::GreaterEqual:
        tableau.at(r, next_slack++) = -1.0;
        tableau.at(r, next_artificial) = 1.0;
        tableau.basis()[r] = next_artificial++;
        break;
      case Sense::Equal:
        tableau.at(r, next_artificial) = 1.0;
        tableau.basis()[r] = next_artificial++;
        break;
    }
  }

  double rhs_scale = 1.0;
  for (const Row& row : rows) rhs_scale = std::max(rhs_scale, std::abs(row.rhs));

  auto fail = [&](SimplexTableau::RunStatus status) {
    if (status == SimplexTableau::RunStatus::IterationLimit) {
      outcome.status = SolveStatus::Error;
      outcome.message = "simplex iteration limit (" + std::to_string(config.max_simplex_iterations) + ") exceeded";
    } else {
      outcome.status = SolveStatus::Unbounded;
    }
    return outcome;
  };

  if (artificial_count > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t j = first_artificial; j < cols; ++j) phase1[j] = -1.0;
    auto status = tableau.maximize(phase1, cols, outcome.iterations, config.max_simplex_iterations);
    if (status == SimplexTableau::RunStatus::IterationLimit) return fail(status);
    double infeasibility = 0.0;
    for (std::size_t r = 0; r < tableau.rows(); ++r) {
      if (tableau.basis()[r] >= first_artificial) infeasibility += tableau.rhs(r);
    }
    if (infeasibility > config.feasibility_tolerance * rhs_scale) {
      outcome.status = SolveStatus::Infeasible;
      return outcome;
    }
    // Drive remaining (zero-level) artificials out; rows where that is
    // impossible are linearly dependent and dropped.
    for (std::size_t r = 0; r < tableau.rows();) {
      if (tableau.basis()[r] < first_artificial) {
        ++r;
        continue;
      }
      std::size_t replacement = first_artificial;
      for (std::size_t j = 0; j < first_artificial; ++j) {
        if (std::abs(tableau.at(r, j)) > SimplexTableau::kPivotTolerance) {
          replacement = j;
          break;
        }
      }
      if (replacement == first_artificial) {
        tableau.erase_row(r);
      } else {
        tableau.pivot(r, replacement);
        ++r;
      }
    }
  }

  const double sign = lp.direction == ObjectiveDirection::Maximize ? 1.0 : -1.0;
  std::vector<double> phase2(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = sign * lp.objective[j];
  auto status = tableau.maximize(phase2, first_artificial, outcome.iterations, config.max_simplex_iterations);
  if (status != SimplexTableau::RunStatus::Optimal) return fail(status);

  std::vector<double> y(n, 0.0);
  for (std::size_t r = 0; r < tableau.rows(); ++r) {
    if (tableau.basis()[r] < n) y[tableau.basis()[r]] = std::max(tableau.rhs(r), 0.0);
  }
  outcome.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double value = lower[j] + y[j];
    if (upper[j] != kInfinity) value = std::min(value, upper[j]);
    if (std::abs(value) < 1e-12) value = 0.0;
    outcome.x[j] = value;
  }

  // Guard against numerical breakdown: the reported vertex must satisfy the
  // original rows.
  for (std::size_t i = 0; i < lp.num_constraints(); ++i) {
    double activity = 0.0;
    double scale = std::abs(lp.rhs[i]);
    for (std::size_t j = 0; j < n; ++j) {
      activity += lp.matrix[i][j] * outcome.x[j];
      scale = std::max(scale, std::abs(lp.matrix[i][j] * outcome.x[j]));
    }
    const double tol = 1e-6 * std::max(1.0, scale);
    const bool ok = (lp.senses[i] == Sense::LessEqual && activity <= lp.rhs[i] + tol) ||
                    (lp.senses[i] == Sense::GreaterEqual && activity >= lp.rhs[i] - tol) ||
                    (lp.senses[i] == Sense::Equal && std::abs(activity - lp.rhs[i]) <= tol);
    if (!ok) {
      outcome.status = SolveStatus::Error;
      outcome.message = "simplex lost feasibility on row " + std::to_string(i) + " (numerical difficulty)";
      outcome.x.clear();
      return outcome;
    }
  }

  outcome.status = SolveStatus::Optimal;
  outcome.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) outcome.objective += lp.objective[j] * outcome.x[j];
  return outcome;
}

inline Assignment variable_assignment(std::span<const double> x) {
  Assignment assignment;
  assignment.reserve(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) assignment.emplace_back(variable_name(j), x[j]);
  return assignment;
}

// Continuous LP. Integrality flags, if any, are ignored; use solve() to route
// integer programs to branch-and-bound.
inline SolverResult solve_lp(const LpInstance& lp, const SolverConfig& config = {}) {
  LpInstance filled = lp;
  filled.fill_defaults();
  LpOutcome outcome = solve_lp_relaxation(filled, filled.lower_bounds, filled.upper_bounds, config);
  switch (outcome.status) {
    case SolveStatus::Optimal:
      return SolverResult::optimal(outcome.objective, variable_assignment(outcome.x));
    case SolveStatus::Infeasible: return SolverResult::infeasible();
    case SolveStatus::Unbounded: return SolverResult::unbounded();
    case SolveStatus::Error: return SolverResult::error(outcome.message);
  }
  return SolverResult::error("unreachable");
}

}  // namespace opsynth
