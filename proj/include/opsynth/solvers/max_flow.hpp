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
#include <queue>
#include <vector>

#include "opsynth/core/objective.hpp"
#include "opsynth/core/types.hpp"

namespace opsynth {

namespace detail {

// Residual graph with paired forward/backward edges.
struct ResidualGraph {
  struct Edge {
    int to;
    double residual;
    double cost;
    std::size_t reverse;
  };

  explicit ResidualGraph(std::size_t nodes) : adjacency(nodes) {}

  // Returns (node, edge index) of the forward edge.
  std::pair<int, std::size_t> add_edge(int from, int to, double capacity, double cost = 0.0) {
    const std::size_t forward_index = adjacency[from].size();
    const std::size_t backward_index = adjacency[to].size() + (from == to ? 1 : 0);
    adjacency[from].push_back({to, capacity, cost, backward_index});
    adjacency[to].push_back({from, 0.0, -cost, forward_index});
    return {from, forward_index};
  }

  Edge& edge(std::pair<int, std::size_t> handle) { return adjacency[handle.first][handle.second]; }
  Edge& reverse_of(const Edge& e) { return adjacency[e.to][e.reverse]; }

  std::vector<std::vector<Edge>> adjacency;
};

inline constexpr double kResidualEpsilon = 1e-12;

}  // namespace detail

// Edmonds-Karp: BFS shortest augmenting paths over arcs in input order.
inline SolverResult solve_max_flow(const MaxFlowInstance& mf) {
  detail::ResidualGraph graph(static_cast<std::size_t>(mf.node_count));
  std::vector<std::pair<int, std::size_t>> handles;
  handles.reserve(mf.arcs.size());
  for (const FlowArc& arc : mf.arcs) handles.push_back(graph.add_edge(arc.from, arc.to, arc.capacity));

  double total = 0.0;
  const std::size_t nodes = graph.adjacency.size();
  std::vector<std::pair<int, std::size_t>> via(nodes);
  while (true) {
    std::vector<char> seen(nodes, 0);
    std::queue<int> frontier;
    frontier.push(mf.source);
    seen[mf.source] = 1;
    while (!frontier.empty() && !seen[mf.sink]) {
      const int u = frontier.front();
      frontier.pop();
      for (std::size_t k = 0; k < graph.adjacency[u].size(); ++k) {
        const auto& e = graph.adjacency[u][k];
        if (e.residual <= detail::kResidualEpsilon || seen[e.to]) continue;
        seen[e.to] = 1;
        via[e.to] = {u, k};
        frontier.push(e.to);
      }
    }
    if (!seen[mf.sink]) break;

    double bottleneck = std::numeric_limits<double>::infinity();
    for (int v = mf.sink; v != mf.source; v = via[v].first) {
      bottleneck = std::min(bottleneck, graph.edge(via[v]).residual);
    }
    for (int v = mf.sink; v != mf.source; v = via[v].first) {
      auto& e = graph.edge(via[v]);
      e.residual -= bottleneck;
      graph.reverse_of(e).residual += bottleneck;
    }
    total += bottleneck;
  }

  Assignment flows;
  flows.reserve(mf.arcs.size());
  for (std::size_t e = 0; e < mf.arcs.size(); ++e) {
    double flow = mf.arcs[e].capacity - graph.edge(handles[e]).residual;
    if (mf.arcs[e].from == mf.arcs[e].to || std::abs(flow) < 1e-12) flow = 0.0;
    flows.emplace_back(arc_name(e), flow);
  }
  return SolverResult::optimal(total, std::move(flows));
}

}  // namespace opsynth
