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

// Random key information: instance parameters drawn from the configured
// ranges, tagged with context, objective flavor and render format, and kept
// only when the embedded solver reports an optimum.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "opsynth/core/json_io.hpp"
#include "opsynth/core/number_format.hpp"
#include "opsynth/core/parallel.hpp"
#include "opsynth/core/rng.hpp"
#include "opsynth/sampler/config.hpp"
#include "opsynth/solvers/solve.hpp"

namespace opsynth {

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::int64_t draw(RngStream& rng, const IntRange& range) { return rng.uniform_int(range.lo, range.hi); }

inline double draw(RngStream& rng, const RealRange& range) { return rng.uniform_real(range.lo, range.hi); }

// Positive value rounded to `decimals`; never rounds down to zero.
inline double draw_positive(RngStream& rng, const RealRange& range, int decimals) {
  const double value = round_to(draw(rng, range), decimals);
  return value > 0.0 ? value : std::pow(10.0, -decimals);
}

template <typename Entry>
const Entry& pick_weighted(RngStream& rng, const std::vector<const Entry*>& entries) {
  std::vector<double> weights;
  weights.reserve(entries.size());
  for (const Entry* entry : entries) weights.push_back(entry->weight);
  return *entries[rng.weighted_index(weights)];
}

inline LpInstance sample_linear(ProblemType type, ObjectiveDirection direction, const LinearSamplerConfig& config,
                                RngStream& rng) {
  LpInstance lp;
  lp.direction = direction;
  const auto n = static_cast<std::size_t>(draw(rng, config.variables));
  const auto m = static_cast<std::size_t>(draw(rng, config.constraints));
  for (std::size_t j = 0; j < n; ++j) {
    lp.objective.push_back(draw_positive(rng, config.objective_coefficient, config.objective_decimals));
  }
  const Sense primary = direction == ObjectiveDirection::Maximize ? Sense::LessEqual : Sense::GreaterEqual;
  const Sense secondary = primary == Sense::LessEqual ? Sense::GreaterEqual : Sense::LessEqual;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> row;
    for (std::size_t j = 0; j < n; ++j) {
      row.push_back(draw_positive(rng, config.matrix_coefficient, config.matrix_decimals));
    }
    lp.matrix.push_back(std::move(row));
    const Sense sense = rng.bernoulli(config.secondary_sense_probability) ? secondary : primary;
    lp.senses.push_back(sense);
    lp.rhs.push_back(static_cast<double>(draw(rng, sense == Sense::LessEqual ? config.capacity_rhs
                                                                              : config.requirement_rhs)));
  }
  lp.lower_bounds.assign(n, 0.0);
  lp.upper_bounds.assign(n, kInfinity);
  lp.integrality.assign(n, type == ProblemType::IP);
  if (type == ProblemType::MILP) {
    std::size_t integers = 0;
    for (std::size_t j = 0; j < n; ++j) {
      lp.integrality[j] = rng.bernoulli(config.integer_probability);
      integers += lp.integrality[j] ? 1 : 0;
    }
    // Force at least one variable of each kind.
    if (integers == 0) lp.integrality[rng.uniform_index(n)] = true;
    if (integers == n) lp.integrality[rng.uniform_index(n)] = false;
  }
  return lp;
}

inline TspInstance sample_tsp(const TspSamplerConfig& config, RngStream& rng) {
  const auto n = static_cast<std::size_t>(draw(rng, config.cities));
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < n; ++i) points.emplace_back(draw(rng, config.coordinate), draw(rng, config.coordinate));
  TspInstance tsp;
  tsp.symmetric = true;
  tsp.dist.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::round(std::hypot(points[i].first - points[j].first, points[i].second - points[j].second));
      tsp.dist[i][j] = d;
      tsp.dist[j][i] = d;
    }
  }
  return tsp;
}

// Source is node 0 and sink the last node; no arc enters the source or leaves
// the sink.
inline MaxFlowInstance sample_max_flow(const MaxFlowSamplerConfig& config, RngStream& rng) {
  MaxFlowInstance mf;
  mf.node_count = static_cast<int>(draw(rng, config.nodes));
  mf.source = 0;
  mf.sink = mf.node_count - 1;
  const double density = draw(rng, config.density);
  for (int u = 0; u < mf.node_count; ++u) {
    for (int v = 0; v < mf.node_count; ++v) {
      if (u == v || v == mf.source || u == mf.sink) continue;
      if (!rng.bernoulli(density)) continue;
      mf.arcs.push_back({u, v, static_cast<double>(draw(rng, config.capacity))});
    }
  }
  return mf;
}

inline AssignmentInstance sample_assignment(ObjectiveDirection direction, const AssignmentSamplerConfig& config,
                                            RngStream& rng) {
  AssignmentInstance ap;
  ap.direction = direction;
  const auto n = static_cast<std::size_t>(draw(rng, config.size));
  ap.cost.assign(n, std::vector<double>(n));
  for (auto& row : ap.cost) {
    for (double& c : row) c = static_cast<double>(draw(rng, config.cost));
  }
  return ap;
}

// `total` split into `parts` positive integers (parts <= total), or into
// near-equal zeros-allowed parts when total < parts.
inline std::vector<double> split_amount(std::int64_t total, std::size_t parts, RngStream& rng) {
  std::vector<double> out(parts, 0.0);
  const auto floor_each = total >= static_cast<std::int64_t>(parts) ? 1 : 0;
  std::int64_t remaining = total - floor_each * static_cast<std::int64_t>(parts);
  for (double& v : out) v = floor_each;
  while (remaining-- > 0) out[rng.uniform_index(parts)] += 1.0;
  return out;
}

inline MinCostFlowInstance sample_min_cost_flow(const MinCostFlowSamplerConfig& config, RngStream& rng) {
  MinCostFlowInstance mcf;
  mcf.node_count = static_cast<int>(draw(rng, config.nodes));
  const double density = draw(rng, config.density);
  for (int u = 0; u < mcf.node_count; ++u) {
    for (int v = 0; v < mcf.node_count; ++v) {
      if (u == v || !rng.bernoulli(density)) continue;
      mcf.arcs.push_back({u, v, static_cast<double>(draw(rng, config.capacity)),
                          static_cast<double>(draw(rng, config.unit_cost))});
    }
  }
  std::vector<int> nodes(static_cast<std::size_t>(mcf.node_count));
  std::iota(nodes.begin(), nodes.end(), 0);
  rng.shuffle(std::span<int>(nodes));
  const auto suppliers = static_cast<std::size_t>(draw(rng, config.supply_nodes));
  const auto consumers = static_cast<std::size_t>(draw(rng, config.demand_nodes));
  const std::int64_t total = draw(rng, config.total_supply);
  const auto supply = split_amount(total, suppliers, rng);
  const auto demand = split_amount(total, consumers, rng);
  mcf.supplies.assign(nodes.size(), 0.0);
  for (std::size_t k = 0; k < suppliers; ++k) mcf.supplies[static_cast<std::size_t>(nodes[k])] = supply[k];
  for (std::size_t k = 0; k < consumers; ++k) {
    mcf.supplies[static_cast<std::size_t>(nodes[suppliers + k])] = -demand[k];
  }
  return mcf;
}

inline ProblemInstance sample_instance(ProblemType type, ObjectiveDirection direction, const SamplerConfig& config,
                                       RngStream& rng) {
  switch (type) {
    case ProblemType::LP:
    case ProblemType::IP:
    case ProblemType::MILP: return {type, sample_linear(type, direction, config.linear, rng)};
    case ProblemType::TSP: return {type, sample_tsp(config.tsp, rng)};
    case ProblemType::MF: return {type, sample_max_flow(config.max_flow, rng)};
    case ProblemType::AP: return {type, sample_assignment(direction, config.assignment, rng)};
    case ProblemType::MCF: return {type, sample_min_cost_flow(config.min_cost_flow, rng)};
  }
  throw std::logic_error("unknown problem type");
}

}  // namespace detail

// Draws flavor, context and render format, then instances until one solves to
// optimality (a max-flow instance must also carry positive flow). Throws
// SamplingError once max_resample_attempts draws have failed.
inline KeyInfo sample_key_info(ProblemType type, const SamplerConfig& config, RngStream& rng) {
  const std::string type_name(to_string(type));
  auto contexts = config.contexts_for(type);
  if (contexts.empty()) throw SamplingError("no context in the catalog applies to " + type_name);
  auto flavor_list = config.flavors.find(type);
  if (flavor_list == config.flavors.end() || flavor_list->second.empty()) {
    throw SamplingError("no objective flavor configured for " + type_name);
  }
  std::vector<const FlavorEntry*> flavors;
  for (const FlavorEntry& flavor : flavor_list->second) flavors.push_back(&flavor);

  KeyInfo info;
  const FlavorEntry& flavor = detail::pick_weighted(rng, flavors);
  info.objective_flavor = flavor.label;
  info.context = detail::pick_weighted(rng, contexts).label;
  info.render_format = kAllRenderFormats[rng.weighted_index(config.render_format_weights)];

  for (int attempt = 0; attempt < config.max_resample_attempts; ++attempt) {
    ProblemInstance instance = detail::sample_instance(type, flavor.direction, config, rng);
    SolverResult result = solve(instance, config.solver);
    if (!result.is_optimal()) continue;
    if (type == ProblemType::MF && !(*result.objective > 0.0)) continue;
    info.instance = std::move(instance);
    info.ground_truth = std::move(result);
    return info;
  }
  throw SamplingError("could not sample an optimal " + type_name + " instance in " +
                      std::to_string(config.max_resample_attempts) + " attempts");
}

// Instance i uses derive_stream(master_seed, i); output is in index order.
inline std::vector<KeyInfo> sample_batch(ProblemType type, std::size_t count, const SamplerConfig& config,
                                         std::uint64_t master_seed, std::size_t jobs = 1) {
  if (count < 1) throw SamplingError("count must be at least 1");
  std::vector<KeyInfo> out(count);
  parallel_for(count, jobs, [&](std::size_t i) {
    auto rng = derive_stream(master_seed, i);
    try {
      out[i] = sample_key_info(type, config, rng);
    } catch (const SamplingError& e) {
      throw SamplingError("instance " + std::to_string(i) + ": " + e.what());
    }
  });
  return out;
}

inline std::string key_info_jsonl(const std::vector<KeyInfo>& batch) {
  std::string out;
  for (const KeyInfo& info : batch) {
    out += key_info_to_json(info).dump();
    out += '\n';
  }
  return out;
}

// Sidecar manifest for a sampled batch.
inline Json sample_manifest(ProblemType type, std::uint64_t master_seed, const SamplerConfig& config,
                            const std::vector<KeyInfo>& batch, const std::string& jsonl) {
  std::map<std::string, std::size_t> contexts;
  std::map<std::string, std::size_t> formats;
  for (const KeyInfo& info : batch) {
    ++contexts[info.context];
    ++formats[std::string(to_string(info.render_format))];
  }
  Json manifest;
  manifest["seed"] = master_seed;
  manifest["config_sha256"] = sampler_config_hash(config);
  manifest["counts"] = {{std::string(to_string(type)), batch.size()}};
  manifest["contexts"] = contexts;
  manifest["render_formats"] = formats;
  manifest["jsonl_sha256"] = sha256_hex(jsonl);
  return manifest;
}

}  // namespace opsynth
