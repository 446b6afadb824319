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

#include <gtest/gtest.h>

#include <set>

#include "opsynth/core/validate.hpp"
#include "opsynth/sampler/sampler.hpp"
#include "support/oracles.hpp"

namespace opsynth {
namespace {

TEST(SampleKeyInfoTest, LinearProgramFromStream42) {
  auto rng = derive_stream(42, 0);
  KeyInfo info = sample_key_info(ProblemType::LP, default_sampler_config(), rng);
  const auto& lp = std::get<LpInstance>(info.instance.data);
  EXPECT_GE(lp.num_variables(), 2u);
  EXPECT_LE(lp.num_variables(), 8u);
  for (const auto& row : lp.matrix) {
    for (double a : row) EXPECT_GT(a, 0.0);
  }
  ASSERT_TRUE(info.ground_truth.is_optimal());
  // Bounded for the oracle: positive rows cap every variable at max b / min a.
  LpInstance boxed = lp;
  for (double& u : boxed.upper_bounds) u = 1e4;
  const auto oracle = oracle::lp_vertex_enumeration(boxed);
  ASSERT_TRUE(oracle.feasible);
  EXPECT_NEAR(*info.ground_truth.objective, oracle.objective, 1e-6);
}

TEST(SampleKeyInfoTest, TspFromStream7) {
  auto rng = derive_stream(7, 0);
  KeyInfo info = sample_key_info(ProblemType::TSP, default_sampler_config(), rng);
  const auto& tsp = std::get<TspInstance>(info.instance.data);
  EXPECT_TRUE(tsp.symmetric);
  EXPECT_GE(tsp.size(), 5u);
  EXPECT_LE(tsp.size(), 12u);
  for (std::size_t i = 0; i < tsp.size(); ++i) {
    EXPECT_EQ(tsp.dist[i][i], 0.0);
    for (std::size_t j = 0; j < tsp.size(); ++j) EXPECT_EQ(tsp.dist[i][j], tsp.dist[j][i]);
  }
}

TEST(SampleKeyInfoTest, ImpossibleMinCostFlowExhaustsAttempts) {
  SamplerConfig config = default_sampler_config();
  config.min_cost_flow.capacity = {1, 1};
  config.min_cost_flow.total_supply = {100, 200};
  auto rng = derive_stream(3, 0);
  try {
    sample_key_info(ProblemType::MCF, config, rng);
    FAIL() << "expected SamplingError";
  } catch (const SamplingError& e) {
    EXPECT_STREQ(e.what(), "could not sample an optimal MCF instance in 50 attempts");
  }
}

TEST(SampleKeyInfoTest, EveryTypeIsValidAndOptimal) {
  const SamplerConfig config = default_sampler_config();
  for (ProblemType type : kAllProblemTypes) {
    for (std::uint64_t i = 0; i < 60; ++i) {
      auto rng = derive_stream(100 + ordinal(type), i);
      KeyInfo info = sample_key_info(type, config, rng);
      EXPECT_EQ(info.type(), type);
      EXPECT_TRUE(validate_instance(info.instance).empty());
      ASSERT_TRUE(info.ground_truth.is_optimal());
      EXPECT_EQ(solve(info.instance), info.ground_truth);
      EXPECT_FALSE(info.context.empty());
      EXPECT_FALSE(info.objective_flavor.empty());
    }
  }
}

TEST(SampleKeyInfoTest, FlavorFixesDirection) {
  const SamplerConfig config = default_sampler_config();
  for (std::uint64_t i = 0; i < 80; ++i) {
    auto rng = derive_stream(5, i);
    KeyInfo info = sample_key_info(ProblemType::AP, config, rng);
    const auto& ap = std::get<AssignmentInstance>(info.instance.data);
    const bool maximize = info.objective_flavor.find("maximization") != std::string::npos;
    EXPECT_EQ(ap.direction == ObjectiveDirection::Maximize, maximize) << info.objective_flavor;
  }
}

TEST(SampleKeyInfoTest, MilpMixesVariableKinds) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    auto rng = derive_stream(6, i);
    KeyInfo info = sample_key_info(ProblemType::MILP, default_sampler_config(), rng);
    const auto& flags = std::get<LpInstance>(info.instance.data).integrality;
    EXPECT_TRUE(std::count(flags.begin(), flags.end(), true) >= 1);
    EXPECT_TRUE(std::count(flags.begin(), flags.end(), false) >= 1);
  }
}

TEST(SampleBatchTest, CountsAndDeterminism) {
  const SamplerConfig config = default_sampler_config();
  auto first = sample_batch(ProblemType::MCF, 25, config, 2);
  ASSERT_EQ(first.size(), 25u);
  auto second = sample_batch(ProblemType::MCF, 25, config, 2, 4);
  EXPECT_EQ(key_info_jsonl(first), key_info_jsonl(second));
  auto rng = derive_stream(2, 7);
  EXPECT_EQ(first[7], sample_key_info(ProblemType::MCF, config, rng));
}

TEST(SampleBatchTest, DiversityFloor) {
  const SamplerConfig config = default_sampler_config();
  for (ProblemType type : kAllProblemTypes) {
    auto batch = sample_batch(type, 150, config, 31);
    std::set<std::string> contexts;
    std::set<RenderFormat> formats;
    for (const auto& info : batch) {
      contexts.insert(info.context);
      formats.insert(info.render_format);
    }
    EXPECT_EQ(contexts.size(), config.contexts_for(type).size()) << to_string(type);
    EXPECT_EQ(formats.size(), 3u) << to_string(type);
  }
}

TEST(SampleBatchTest, FailingIndexIsNamed) {
  SamplerConfig config = default_sampler_config();
  config.min_cost_flow.capacity = {1, 1};
  config.min_cost_flow.total_supply = {100, 200};
  try {
    sample_batch(ProblemType::MCF, 3, config, 1);
    FAIL();
  } catch (const SamplingError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("instance 0: ", 0), 0u);
  }
}

TEST(SampleBatchTest, ManifestRecordsSeedAndHash) {
  const SamplerConfig config = default_sampler_config();
  auto batch = sample_batch(ProblemType::TSP, 5, config, 9);
  const std::string jsonl = key_info_jsonl(batch);
  Json manifest = sample_manifest(ProblemType::TSP, 9, config, batch, jsonl);
  EXPECT_EQ(manifest["seed"], 9);
  EXPECT_EQ(manifest["counts"]["TSP"], 5);
  EXPECT_EQ(manifest["config_sha256"], sampler_config_hash(config));
  EXPECT_EQ(manifest["jsonl_sha256"], sha256_hex(jsonl));
  // Each line parses back to the sampled record.
  std::size_t start = 0;
  for (const KeyInfo& info : batch) {
    const std::size_t end = jsonl.find('\n', start);
    EXPECT_EQ(key_info_from_json(Json::parse(jsonl.substr(start, end - start))), info);
    start = end + 1;
  }
}

TEST(SamplerConfigTest, DefaultsAreValidAndRoundTrip) {
  const SamplerConfig config = default_sampler_config();
  EXPECT_TRUE(sampler_config_violations(config).empty());
  EXPECT_EQ(sampler_config_from_json(sampler_config_to_json(config)), config);
  EXPECT_EQ(sampler_config_from_json(Json::object()), config);
}

TEST(SamplerConfigTest, ViolationsNamePaths) {
  SamplerConfig config = default_sampler_config();
  config.tsp.cities = {5, 14};
  config.linear.variables = {6, 3};
  config.render_format_weights[1] = 0.0;
  config.contexts.erase(std::remove_if(config.contexts.begin(), config.contexts.end(),
                                       [](const ContextEntry& e) { return e.label == "tourism"; }),
                        config.contexts.end());
  for (auto& entry : config.contexts) {
    std::erase(entry.types, ProblemType::TSP);
  }
  auto violations = sampler_config_violations(config);
  auto has = [&](const std::string& text) {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const std::string& v) { return v.find(text) != std::string::npos; });
  };
  EXPECT_TRUE(has("sampler.tsp.cities: upper end exceeds solver.tsp_exact_city_cap (12)"));
  EXPECT_TRUE(has("sampler.linear.variables: empty range [6, 3]"));
  EXPECT_TRUE(has("sampler.render_formats.matrix: must be positive"));
  EXPECT_TRUE(has("sampler.contexts: no context applies to TSP"));
}

TEST(SamplerConfigTest, UnknownAndMistypedFields) {
  try {
    sampler_config_from_json(Json::parse(R"({"tsp": {"citys": [5, 6]}})"));
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.path(), "sampler.tsp.citys");
  }
  try {
    sampler_config_from_json(Json::parse(R"({"max_flow": {"nodes": [4, "ten"]}})"));
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.path(), "sampler.max_flow.nodes[1]");
  }
}

TEST(SamplerConfigTest, HashTracksContent) {
  SamplerConfig a = default_sampler_config();
  SamplerConfig b = a;
  EXPECT_EQ(sampler_config_hash(a), sampler_config_hash(b));
  b.solver.max_bnb_nodes = 10;
  EXPECT_NE(sampler_config_hash(a), sampler_config_hash(b));
}

}  // namespace
}  // namespace opsynth
