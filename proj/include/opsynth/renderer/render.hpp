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

// Text renderings of key information in three layouts. Rendering is lossless:
// the numeric literals in the output are exactly parameter_values(instance).
// Labels are therefore letters (x_A, City B, Node C), never digits.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "opsynth/core/number_format.hpp"
#include "opsynth/core/types.hpp"

namespace opsynth {

// Bijective base-26 label: 0 -> A, 25 -> Z, 26 -> AA.
inline std::string letter_label(std::size_t index) {
  std::string out;
  std::size_t n = index + 1;
  while (n > 0) {
    --n;
    out.insert(out.begin(), static_cast<char>('A' + n % 26));
    n /= 26;
  }
  return out;
}

inline std::string problem_type_title(ProblemType type) {
  switch (type) {
    case ProblemType::LP: return "Linear program";
    case ProblemType::IP: return "Integer program";
    case ProblemType::MILP: return "Mixed-integer linear program";
    case ProblemType::TSP: return "Traveling salesman problem";
    case ProblemType::MF: return "Maximum flow problem";
    case ProblemType::AP: return "Assignment problem";
    case ProblemType::MCF: return "Minimum-cost flow problem";
  }
  return "Problem";
}

// Every number a rendering must show, in no particular order: LP-family c, A,
// b and non-default bounds; TSP off-diagonal distances; MF capacities; AP
// costs; MCF capacities, unit costs and the magnitudes of nonzero supplies.
inline std::vector<double> parameter_values(const ProblemInstance& instance) {
  std::vector<double> out;
  std::visit(
      [&](const auto& data) {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, LpInstance>) {
          out.insert(out.end(), data.objective.begin(), data.objective.end());
          for (const auto& row : data.matrix) out.insert(out.end(), row.begin(), row.end());
          out.insert(out.end(), data.rhs.begin(), data.rhs.end());
          const bool lower = std::any_of(data.lower_bounds.begin(), data.lower_bounds.end(),
                                         [](double v) { return v != 0.0; });
          for (double v : data.lower_bounds) {
            if (lower && std::isfinite(v)) out.push_back(v);
          }
          for (double v : data.upper_bounds) {
            if (std::isfinite(v)) out.push_back(v);
          }
        } else if constexpr (std::is_same_v<T, TspInstance>) {
          for (std::size_t i = 0; i < data.dist.size(); ++i) {
            for (std::size_t j = 0; j < data.dist[i].size(); ++j) {
              if (i != j) out.push_back(data.dist[i][j]);
            }
          }
        } else if constexpr (std::is_same_v<T, MaxFlowInstance>) {
          for (const FlowArc& arc : data.arcs) out.push_back(arc.capacity);
        } else if constexpr (std::is_same_v<T, AssignmentInstance>) {
          for (const auto& row : data.cost) out.insert(out.end(), row.begin(), row.end());
        } else {
          for (const CostArc& arc : data.arcs) {
            out.push_back(arc.capacity);
            out.push_back(arc.unit_cost);
          }
          for (double s : data.supplies) {
            if (s != 0.0) out.push_back(std::abs(s));
          }
        }
      },
      instance.data);
  return out;
}

namespace detail {

inline std::string var_label(std::size_t j) { return "x_" + letter_label(j); }

// "(a)", "(b)", ..., "(aa)"
inline std::string constraint_label(std::size_t i) {
  std::string out = letter_label(i);
  for (char& ch : out) ch = static_cast<char>(ch - 'A' + 'a');
  return "(" + out + ")";
}

inline std::string join(const std::vector<std::string>& items, const std::string& separator) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += separator;
    out += items[i];
  }
  return out;
}

// "A", "A and B", "A, B and C"
inline std::string join_words(const std::vector<std::string>& items) {
  if (items.empty()) return "";
  if (items.size() == 1) return items[0];
  std::vector<std::string> head(items.begin(), items.end() - 1);
  return join(head, ", ") + " and " + items.back();
}

inline std::string bracket(const std::vector<double>& values) {
  std::vector<std::string> items;
  for (double v : values) items.push_back(format_number(v));
  return "[" + join(items, ", ") + "]";
}

inline std::string bound_text(double v) { return std::isfinite(v) ? format_number(v) : (v > 0 ? "inf" : "-inf"); }

inline std::string table_row(const std::vector<std::string>& cells) { return "| " + join(cells, " | ") + " |\n"; }

inline std::string table_rule(std::size_t columns) {
  std::string out = "|";
  for (std::size_t i = 0; i < columns; ++i) out += "---|";
  return out + "\n";
}

inline std::string sense_words(Sense sense) {
  switch (sense) {
    case Sense::LessEqual: return "at most";
    case Sense::GreaterEqual: return "at least";
    case Sense::Equal: return "exactly";
  }
  return "";
}

inline std::string header(const KeyInfo& info) {
  return problem_type_title(info.type()) + " (" + info.objective_flavor + ", " + info.context + ")\n";
}

inline bool default_lower(const LpInstance& lp) {
  return std::all_of(lp.lower_bounds.begin(), lp.lower_bounds.end(), [](double v) { return v == 0.0; });
}

inline bool default_upper(const LpInstance& lp) {
  return std::all_of(lp.upper_bounds.begin(), lp.upper_bounds.end(), [](double v) { return v == kInfinity; });
}

inline std::vector<std::string> integer_labels(const LpInstance& lp) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < lp.integrality.size(); ++j) {
    if (lp.integrality[j]) out.push_back(var_label(j));
  }
  return out;
}

inline std::string linear_expression(const std::vector<double>& coefficients) {
  std::vector<std::string> terms;
  for (std::size_t j = 0; j < coefficients.size(); ++j) {
    terms.push_back(format_number(coefficients[j]) + " " + var_label(j));
  }
  return join(terms, " + ");
}

inline std::string integrality_sentence(const LpInstance& lp) {
  const auto labels = integer_labels(lp);
  if (labels.empty()) return "All variables may take fractional values.";
  if (labels.size() == lp.num_variables()) return "All variables must take integer values.";
  return join_words(labels) + (labels.size() == 1 ? " must take an integer value" : " must take integer values") +
         "; the other variables may be fractional.";
}

inline std::string render_linear(const KeyInfo& info, const LpInstance& lp, RenderFormat format) {
  const std::size_t n = lp.num_variables();
  std::vector<std::string> vars;
  for (std::size_t j = 0; j < n; ++j) vars.push_back(var_label(j));
  const bool maximize = lp.direction == ObjectiveDirection::Maximize;
  std::string out = header(info);

  if (format == RenderFormat::FreeText) {
    out += "Decision variables: " + join_words(vars) + ".\n";
    if (default_lower(lp)) {
      out += "Every variable is nonnegative.\n";
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        out += vars[j] + (std::isfinite(lp.lower_bounds[j]) ? " is at least " + format_number(lp.lower_bounds[j])
                                                            : " has no lower limit") +
               ".\n";
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isfinite(lp.upper_bounds[j])) out += vars[j] + " is at most " + format_number(lp.upper_bounds[j]) + ".\n";
    }
    out += integrality_sentence(lp) + "\n";
    out += std::string("Objective: ") + (maximize ? "maximize " : "minimize ") + linear_expression(lp.objective) +
           ".\n";
    for (std::size_t i = 0; i < lp.num_constraints(); ++i) {
      out += "Constraint " + constraint_label(i) + ": " + linear_expression(lp.matrix[i]) + " must be " + sense_words(lp.senses[i]) + " " +
             format_number(lp.rhs[i]) + ".\n";
    }
    return out;
  }

  if (format == RenderFormat::Matrix) {
    out += std::string(maximize ? "max" : "min") + " c·x\n";
    const bool bounds = !default_lower(lp) || !default_upper(lp);
    out += std::string("subject to A x (senses) b, ") + (bounds ? "lower <= x <= upper" : "x nonnegative") + "\n";
    out += "x = [" + join(vars, ", ") + "]\n";
    out += "c = " + bracket(lp.objective) + "\n";
    out += "A = [";
    for (std::size_t i = 0; i < lp.num_constraints(); ++i) {
      if (i) out += ",\n     ";
      out += bracket(lp.matrix[i]);
    }
    out += "]\n";
    std::vector<std::string> senses;
    for (Sense s : lp.senses) senses.emplace_back(to_string(s));
    out += "senses = [" + join(senses, ", ") + "]\n";
    out += "b = " + bracket(lp.rhs) + "\n";
    if (bounds) {
      std::vector<std::string> lower;
      std::vector<std::string> upper;
      for (double v : lp.lower_bounds) lower.push_back(bound_text(v));
      for (double v : lp.upper_bounds) upper.push_back(bound_text(v));
      if (!default_lower(lp)) {
        out += "lower = [" + join(lower, ", ") + "]\n";
      } else {
        out += "lower = zero for every variable\n";
      }
      out += "upper = [" + join(upper, ", ") + "]\n";
    }
    const auto ints = integer_labels(lp);
    if (ints.empty()) {
      out += "integer variables: none\n";
    } else if (ints.size() == n) {
      out += "integer variables: all\n";
    } else {
      out += "integer variables: " + join(ints, ", ") + "\n";
    }
    return out;
  }

  out += std::string("Objective: ") + (maximize ? "maximize" : "minimize") + "\n";
  std::vector<std::string> head{"Row"};
  head.insert(head.end(), vars.begin(), vars.end());
  head.push_back("Sense");
  head.push_back("RHS");
  out += table_row(head);
  out += table_rule(head.size());
  std::vector<std::string> row{"Objective"};
  for (double v : lp.objective) row.push_back(format_number(v));
  row.push_back(maximize ? "max" : "min");
  row.push_back("-");
  out += table_row(row);
  for (std::size_t i = 0; i < lp.num_constraints(); ++i) {
    row = {constraint_label(i)};
    for (double v : lp.matrix[i]) row.push_back(format_number(v));
    row.emplace_back(to_string(lp.senses[i]));
    row.push_back(format_number(lp.rhs[i]));
    out += table_row(row);
  }
  if (!default_lower(lp)) {
    row = {"Lower bound"};
    for (double v : lp.lower_bounds) row.push_back(bound_text(v));
    row.insert(row.end(), {"", ""});
    out += table_row(row);
  }
  if (!default_upper(lp)) {
    row = {"Upper bound"};
    for (double v : lp.upper_bounds) row.push_back(bound_text(v));
    row.insert(row.end(), {"", ""});
    out += table_row(row);
  }
  row = {"Integer"};
  for (bool flag : lp.integrality) row.push_back(flag ? "yes" : "no");
  row.insert(row.end(), {"", ""});
  out += table_row(row);
  if (default_lower(lp)) out += "All variables are nonnegative.\n";
  return out;
}

inline std::string render_tsp(const KeyInfo& info, const TspInstance& tsp, RenderFormat format) {
  const std::size_t n = tsp.size();
  std::vector<std::string> cities;
  for (std::size_t i = 0; i < n; ++i) cities.push_back("City " + letter_label(i));
  std::string out = header(info);
  const std::string goal = "Find the cheapest round trip that starts and ends at " + cities[0] +
                           " and visits every other city exactly once.\n";

  if (format == RenderFormat::FreeText) {
    out += "Cities: " + join_words(cities) + ".\n";
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> legs;
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) legs.push_back(format_number(tsp.dist[i][j]) + " to " + cities[j]);
      }
      out += "Travel cost from " + cities[i] + ": " + join_words(legs) + ".\n";
    }
    return out + goal;
  }

  if (format == RenderFormat::Matrix) {
    out += "min total cost of a closed tour\n";
    out += "cities = [" + join(cities, ", ") + "]\n";
    out += "D = [";
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += ",\n     ";
      std::vector<std::string> cells;
      for (std::size_t j = 0; j < n; ++j) cells.push_back(i == j ? "-" : format_number(tsp.dist[i][j]));
      out += "[" + join(cells, ", ") + "]";
    }
    out += "]\nD[from][to] is the travel cost between two cities.\n";
    return out + goal;
  }

  std::vector<std::string> head{"From / To"};
  head.insert(head.end(), cities.begin(), cities.end());
  out += table_row(head);
  out += table_rule(head.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> row{cities[i]};
    for (std::size_t j = 0; j < n; ++j) row.push_back(i == j ? "-" : format_number(tsp.dist[i][j]));
    out += table_row(row);
  }
  return out + goal;
}

inline std::string render_max_flow(const KeyInfo& info, const MaxFlowInstance& mf, RenderFormat format) {
  auto node = [](int v) { return "Node " + letter_label(static_cast<std::size_t>(v)); };
  std::vector<std::string> nodes;
  for (int v = 0; v < mf.node_count; ++v) nodes.push_back(node(v));
  std::string out = header(info);

  if (format == RenderFormat::FreeText) {
    out += "Nodes: " + join_words(nodes) + ".\n";
    out += "Flow starts at " + node(mf.source) + " (the source) and ends at " + node(mf.sink) + " (the sink).\n";
    for (const FlowArc& arc : mf.arcs) {
      out += "The link from " + node(arc.from) + " to " + node(arc.to) + " carries at most " +
             format_number(arc.capacity) + " units.\n";
    }
    out += "Find the largest total flow that can be sent from the source to the sink.\n";
    return out;
  }

  if (format == RenderFormat::Matrix) {
    out += "max flow value from s to t\n";
    out += "nodes = [" + join(nodes, ", ") + "]\n";
    out += "s = " + node(mf.source) + ", t = " + node(mf.sink) + "\n";
    out += "arcs (from, to, capacity) = [";
    std::vector<std::string> arcs;
    for (const FlowArc& arc : mf.arcs) {
      arcs.push_back("(" + letter_label(static_cast<std::size_t>(arc.from)) + ", " +
                     letter_label(static_cast<std::size_t>(arc.to)) + ", " + format_number(arc.capacity) + ")");
    }
    out += join(arcs, ",\n  ") + "]\n";
    return out;
  }

  out += "Source: " + node(mf.source) + ". Sink: " + node(mf.sink) + ".\n";
  out += table_row({"From", "To", "Capacity"});
  out += table_rule(3);
  for (const FlowArc& arc : mf.arcs) out += table_row({node(arc.from), node(arc.to), format_number(arc.capacity)});
  out += "Find the maximum flow from the source to the sink.\n";
  return out;
}

inline std::string render_assignment(const KeyInfo& info, const AssignmentInstance& ap, RenderFormat format) {
  const std::size_t n = ap.size();
  std::vector<std::string> agents;
  std::vector<std::string> tasks;
  for (std::size_t i = 0; i < n; ++i) {
    agents.push_back("Agent " + letter_label(i));
    tasks.push_back("Task " + letter_label(i));
  }
  const bool maximize = ap.direction == ObjectiveDirection::Maximize;
  const std::string measure = maximize ? "value" : "cost";
  std::string out = header(info);
  const std::string goal = "Give each agent exactly one task and each task exactly one agent so that the total " +
                           measure + " is " + (maximize ? "maximized" : "minimized") + ".\n";

  if (format == RenderFormat::FreeText) {
    out += "Agents: " + join_words(agents) + ". Tasks: " + join_words(tasks) + ".\n";
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> parts;
      for (std::size_t j = 0; j < n; ++j) parts.push_back(format_number(ap.cost[i][j]) + " for " + tasks[j]);
      out += "The " + measure + " of " + agents[i] + " is " + join_words(parts) + ".\n";
    }
    return out + goal;
  }

  if (format == RenderFormat::Matrix) {
    out += std::string(maximize ? "max" : "min") + " total " + measure + " of a one-to-one assignment\n";
    out += "rows = agents [" + join(agents, ", ") + "]\n";
    out += "columns = tasks [" + join(tasks, ", ") + "]\n";
    out += "C = [";
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += ",\n     ";
      out += bracket(ap.cost[i]);
    }
    out += "]\n";
    return out + goal;
  }

  std::vector<std::string> head{"Agent / Task"};
  head.insert(head.end(), tasks.begin(), tasks.end());
  out += "Entries are the " + measure + " of each pairing.\n";
  out += table_row(head);
  out += table_rule(head.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> row{agents[i]};
    for (double c : ap.cost[i]) row.push_back(format_number(c));
    out += table_row(row);
  }
  return out + goal;
}

inline std::string render_min_cost_flow(const KeyInfo& info, const MinCostFlowInstance& mcf, RenderFormat format) {
  auto node = [](int v) { return "Node " + letter_label(static_cast<std::size_t>(v)); };
  std::vector<std::string> nodes;
  for (int v = 0; v < mcf.node_count; ++v) nodes.push_back(node(v));
  std::string out = header(info);
  const std::string goal = "Meet every supply and demand at minimum total shipping cost.\n";

  if (format == RenderFormat::FreeText) {
    out += "Nodes: " + join_words(nodes) + ".\n";
    bool transshipment = false;
    for (int v = 0; v < mcf.node_count; ++v) {
      const double s = mcf.supplies[static_cast<std::size_t>(v)];
      if (s > 0) out += node(v) + " supplies " + format_number(s) + " units.\n";
      if (s < 0) out += node(v) + " demands " + format_number(-s) + " units.\n";
      transshipment = transshipment || s == 0.0;
    }
    if (transshipment) out += "All other nodes only pass goods through.\n";
    for (const CostArc& arc : mcf.arcs) {
      out += "The link from " + node(arc.from) + " to " + node(arc.to) + " carries at most " +
             format_number(arc.capacity) + " units at a cost of " + format_number(arc.unit_cost) + " per unit.\n";
    }
    return out + goal;
  }

  if (format == RenderFormat::Matrix) {
    out += "min sum of unit_cost·flow over arcs\n";
    out += "nodes = [" + join(nodes, ", ") + "]\n";
    std::vector<std::string> supply;
    std::vector<std::string> demand;
    for (int v = 0; v < mcf.node_count; ++v) {
      const double s = mcf.supplies[static_cast<std::size_t>(v)];
      const std::string label = letter_label(static_cast<std::size_t>(v));
      if (s > 0) supply.push_back("(" + label + ", " + format_number(s) + ")");
      if (s < 0) demand.push_back("(" + label + ", " + format_number(-s) + ")");
    }
    out += "supply nodes = [" + join(supply, ", ") + "]\n";
    out += "demand nodes = [" + join(demand, ", ") + "]\n";
    out += "arcs (from, to, capacity, unit_cost) = [";
    std::vector<std::string> arcs;
    for (const CostArc& arc : mcf.arcs) {
      arcs.push_back("(" + letter_label(static_cast<std::size_t>(arc.from)) + ", " +
                     letter_label(static_cast<std::size_t>(arc.to)) + ", " + format_number(arc.capacity) + ", " +
                     format_number(arc.unit_cost) + ")");
    }
    out += join(arcs, ",\n  ") + "]\n";
    return out + goal;
  }

  out += table_row({"Node", "Role", "Amount"});
  out += table_rule(3);
  for (int v = 0; v < mcf.node_count; ++v) {
    const double s = mcf.supplies[static_cast<std::size_t>(v)];
    if (s > 0) out += table_row({node(v), "supply", format_number(s)});
    if (s < 0) out += table_row({node(v), "demand", format_number(-s)});
    if (s == 0) out += table_row({node(v), "transshipment", "-"});
  }
  out += "\n";
  out += table_row({"From", "To", "Capacity", "Unit cost"});
  out += table_rule(4);
  for (const CostArc& arc : mcf.arcs) {
    out += table_row({node(arc.from), node(arc.to), format_number(arc.capacity), format_number(arc.unit_cost)});
  }
  return out + goal;
}

}  // namespace detail

// Renders info.instance in info.render_format. Pure.
inline std::string render_key_info(const KeyInfo& info) {
  return std::visit(
      [&](const auto& data) -> std::string {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, LpInstance>) {
          return detail::render_linear(info, data, info.render_format);
        } else if constexpr (std::is_same_v<T, TspInstance>) {
          return detail::render_tsp(info, data, info.render_format);
        } else if constexpr (std::is_same_v<T, MaxFlowInstance>) {
          return detail::render_max_flow(info, data, info.render_format);
        } else if constexpr (std::is_same_v<T, AssignmentInstance>) {
          return detail::render_assignment(info, data, info.render_format);
        } else {
          return detail::render_min_cost_flow(info, data, info.render_format);
        }
      },
      info.instance.data);
}

}  // namespace opsynth
