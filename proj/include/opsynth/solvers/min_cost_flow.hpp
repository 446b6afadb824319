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
#include <limits>
#include <vector>

#include "opsynth/core/objective.hpp"
#include "opsynth/core/types.hpp"
#include "opsynth/solvers/max_flow.hpp"

namespace opsynth {

// Successive shortest paths from a super source (feeding every supply node)
// to a super sink (draining every demand node), with Bellman-Ford path search.
//
// Arcs with negative unit cost start saturated and the supplies are adjusted
// accordingly, so every residual arc initially has nonnegative cost; SSP keeps
// the residual graph free of negative cycles from there on. Infeasible when
// the supplies cannot all be routed.
inline SolverResult solve_min_cost_flow(const MinCostFlowInstance& mcf) {
  const int nodes = mcf.node_count;
  const int super_source = nodes;
  const int super_sink = nodes + 1;
  detail::ResidualGraph graph(static_cast<std::size_t>(nodes + 2));

  std::vector<double> balance = mcf.supplies;
  std::vector<std::pair<int, std::size_t>> handles;
  handles.reserve(mcf.arcs.size());
  for (const CostArc& arc : mcf.arcs) {
    // Self-loops never affect balances; they are priced directly below.
    if (arc.from == arc.to) {
      handles.emplace_back(-1, 0);
      continue;
    }
    auto handle = graph.add_edge(arc.from, arc.to, arc.capacity, arc.unit_cost);
    if (arc.unit_cost < 0) {
      auto& e = graph.edge(handle);
      e.residual = 0.0;
      graph.reverse_of(e).residual = arc.capacity;
      balance[arc.from] -= arc.capacity;
      balance[arc.to] += arc.capacity;
    }
    handles.push_back(handle);
  }
  double required = 0.0;
  for (int v = 0; v < nodes; ++v) {
    if (balance[v] > 0) {
      graph.add_edge(super_source, v, balance[v]);
      required += balance[v];
    } else if (balance[v] < 0) {
      graph.add_edge(v, super_sink, -balance[v]);
    }
  }

  const std::size_t total_nodes = graph.adjacency.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> distance(total_nodes);
  std::vector<std::pair<int, std::size_t>> via(total_nodes);
  double shipped = 0.0;
  while (shipped < required - 1e-9 * std::max(1.0, required)) {
    std::fill(distance.begin(), distance.end(), kInf);
    distance[super_source] = 0.0;
    for (std::size_t round = 0; round + 1 < total_nodes; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < total_nodes; ++u) {
        if (distance[u] == kInf) continue;
        for (std::size_t k = 0; k < graph.adjacency[u].size(); ++k) {
          const auto& e = graph.adjacency[u][k];
          if (e.residual <= detail::kResidualEpsilon) continue;
          const double candidate = distance[u] + e.cost;
          if (candidate < distance[e.to] - 1e-12) {
            distance[e.to] = candidate;
            via[e.to] = {static_cast<int>(u), k};
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (distance[super_sink] == kInf) break;

    double bottleneck = kInf;
    for (int v = super_sink; v != super_source; v = via[v].first) {
      bottleneck = std::min(bottleneck, graph.edge(via[v]).residual);
    }
    for (int v = super_sink; v != super_source; v = via[v].first) {
      auto& e = graph.edge(via[v]);
      e.residual -= bottleneck;
      graph.reverse_of(e).residual += bottleneck;
    }
    shipped += bottleneck;
  }
  if (shipped < required - 1e-9 * std::max(1.0, required)) return SolverResult::infeasible();

  Assignment flows;
  double objective = 0.0;
  for (std::size_t e = 0; e < mcf.arcs.size(); ++e) {
    double flow = 0.0;
    if (handles[e].first < 0) {
      flow = mcf.arcs[e].unit_cost < 0 ? mcf.arcs[e].capacity : 0.0;
    } else {
      flow = mcf.arcs[e].capacity - graph.edge(handles[e]).residual;
    }
    if (std::abs(flow) < 1e-12) flow = 0.0;
    flows.emplace_back(arc_name(e), flow);
    objective += flow * mcf.arcs[e].unit_cost;
  }
  return SolverResult::optimal(objective, std::move(flows));
}

}  // namespace opsynth
