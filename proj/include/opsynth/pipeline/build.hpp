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

// End-to-end dataset construction: sample key information, generate a
// statement and an answer, keep the pair only if the answer's call reproduces
// the ground-truth optimum, and format kept pairs as dialogues.
//
// Attempt a of type T draws from stream (ordinal(T) << 32) | a. Dropped
// attempts are never retried; fresh attempts are drawn until the quota is
// met. Records are taken in attempt order, so output depends only on the plan,
// the configuration, the seed and the client, never on chunking or jobs.

#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "opsynth/core/parallel.hpp"
#include "opsynth/pipeline/config.hpp"
#include "opsynth/pipeline/dialogue.hpp"
#include "opsynth/sampler/sampler.hpp"

namespace opsynth {

using DatasetPlan = std::map<ProblemType, std::size_t>;

struct BuildOptions {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string split;                      // free-form label recorded in the manifest
  std::set<std::string> excluded_hashes;  // instances that must not appear (e.g. a train split)
  std::function<void(const std::string&)> progress;
};

struct TypeTally {
  std::size_t target = 0;
  std::size_t kept = 0;
  std::size_t attempted = 0;
  std::size_t overlap_skipped = 0;
  std::map<FilterReason, std::size_t> drops;

  std::size_t dropped() const {
    std::size_t total = 0;
    for (const auto& [reason, count] : drops) total += count;
    return total;
  }
};

struct BuildResult {
  std::vector<DialogueRecord> records;
  std::map<ProblemType, TypeTally> tallies;
  bool aborted = false;
  std::string abort_reason;
};

inline std::uint64_t attempt_stream_index(ProblemType type, std::uint64_t attempt) {
  return (static_cast<std::uint64_t>(ordinal(type)) << 32) | attempt;
}

// Stream for the tool lineup of an attempt; disjoint from sampling streams.
inline std::uint64_t lineup_stream_index(std::uint64_t stream_index) { return stream_index | (1ULL << 63); }

namespace detail {

struct Attempt {
  std::uint64_t index = 0;
  KeyInfo info;
  bool overlap = false;
  GenResponse statement;
  GenResponse answer;
  FilterVerdict verdict;
};

inline GenRequest stage_request(const KeyInfo& info, GenStage stage, std::string prompt, const GenerationSettings& g,
                                std::uint64_t stream_index) {
  GenRequest request;
  request.prompt = std::move(prompt);
  request.temperature = g.temperature;
  request.max_output_tokens = g.max_output_tokens;
  request.request_tag = record_id(info.type(), stream_index & 0xffffffffULL) +
                        (stage == GenStage::Problem ? "/problem" : "/answer");
  request.grounding = std::make_shared<Grounding>(Grounding{info, stage});
  return request;
}

inline std::string failure_text(const GenResponse& response) {
  if (response.finish_reason == FinishReason::Length) return "output truncated at the token limit";
  return std::string(to_string(response.error_kind)) + ": " + response.error_message;
}

}  // namespace detail

inline BuildResult build_dataset(const DatasetPlan& plan, const DatasetConfig& config, GenerationClient& client,
                                 const BuildOptions& options = {},
                                 const ToolRegistry& registry = builtin_registry()) {
  BuildResult result;
  const PromptTemplates templates = prompt_templates_for(config.pipeline);
  const GenerationSettings& g = config.generation;
  const std::size_t jobs = std::max<std::size_t>(1, options.jobs);
  const auto in_flight = static_cast<std::size_t>(std::max(1, g.max_in_flight));

  for (const auto& [type, target] : plan) {
    TypeTally& tally = result.tallies[type];
    tally.target = target;
  }
  for (const auto& [type, target] : plan) {
    TypeTally& tally = result.tallies[type];
    const std::string tool_doc = render_tool_doc(registry.for_type(type));
    const std::size_t max_attempts = target * static_cast<std::size_t>(config.pipeline.max_attempts_factor) + 100;
    std::uint64_t next_attempt = 0;
    int consecutive_failures = 0;

    while (tally.kept < target && !result.aborted) {
      if (tally.attempted >= max_attempts) {
        result.aborted = true;
        result.abort_reason = std::string(to_string(type)) + ": only " + std::to_string(tally.kept) + " of " +
                              std::to_string(target) + " records kept after " + std::to_string(tally.attempted) +
                              " attempts";
        break;
      }
      const std::size_t remaining = target - tally.kept;
      const std::size_t size =
          std::min<std::size_t>(static_cast<std::size_t>(config.pipeline.chunk_size), remaining + remaining / 4 + 4);
      std::vector<detail::Attempt> chunk(size);

      parallel_for(size, jobs, [&](std::size_t k) {
        detail::Attempt& a = chunk[k];
        a.index = next_attempt + k;
        RngStream rng = derive_stream(options.seed, attempt_stream_index(type, a.index));
        try {
          a.info = sample_key_info(type, config.sampler, rng);
        } catch (const SamplingError& e) {
          throw SamplingError(std::string(to_string(type)) + " attempt " + std::to_string(a.index) + ": " + e.what());
        }
        a.overlap = options.excluded_hashes.contains(instance_hash(a.info.instance));
      });

      std::vector<std::size_t> live;
      for (std::size_t k = 0; k < size; ++k) {
        if (!chunk[k].overlap) live.push_back(k);
      }
      std::vector<GenRequest> requests;
      for (std::size_t k : live) {
        const auto& a = chunk[k];
        requests.push_back(detail::stage_request(a.info, GenStage::Problem, build_problem_prompt(a.info, templates), g,
                                                 attempt_stream_index(type, a.index)));
      }
      auto statements = generate_batch(client, requests, in_flight);
      requests.clear();
      std::vector<std::size_t> answered;
      for (std::size_t i = 0; i < live.size(); ++i) {
        auto& a = chunk[live[i]];
        a.statement = std::move(statements[i]);
        if (a.statement.finish_reason != FinishReason::Complete) continue;
        answered.push_back(live[i]);
        requests.push_back(detail::stage_request(a.info, GenStage::Answer,
                                                 build_answer_prompt(tool_doc, a.statement.text, templates), g,
                                                 attempt_stream_index(type, a.index)));
      }
      auto answers = generate_batch(client, requests, in_flight);
      for (std::size_t i = 0; i < answered.size(); ++i) chunk[answered[i]].answer = std::move(answers[i]);

      parallel_for(size, jobs, [&](std::size_t k) {
        detail::Attempt& a = chunk[k];
        if (a.overlap) return;
        if (a.statement.finish_reason != FinishReason::Complete) {
          a.verdict = FilterVerdict::generation_error("statement: " + detail::failure_text(a.statement));
        } else if (a.answer.finish_reason != FinishReason::Complete) {
          a.verdict = FilterVerdict::generation_error("answer: " + detail::failure_text(a.answer));
        } else {
          a.verdict = filter_pair(a.info, a.answer.text, config.sampler.solver, registry);
        }
      });

      for (detail::Attempt& a : chunk) {
        ++tally.attempted;
        if (a.overlap) {
          ++tally.overlap_skipped;
          continue;
        }
        if (a.verdict.reason == FilterReason::GenerationError) {
          ++tally.drops[FilterReason::GenerationError];
          if (++consecutive_failures >= config.pipeline.max_consecutive_generation_failures) {
            result.aborted = true;
            result.abort_reason = "generation failed " + std::to_string(consecutive_failures) +
                                  " times in a row; last error: " + a.verdict.detail;
            break;
          }
          continue;
        }
        consecutive_failures = 0;
        if (!a.verdict.kept) {
          ++tally.drops[a.verdict.reason];
          continue;
        }
        const std::uint64_t stream = attempt_stream_index(type, a.index);
        RngStream lineup = derive_stream(options.seed, lineup_stream_index(stream));
        result.records.push_back(
            format_dialogue(a.info, a.statement.text, a.answer.text, registry, lineup, options.seed, stream, a.index));
        if (++tally.kept == target) break;
      }
      next_attempt += size;
      if (options.progress) {
        options.progress(std::string(to_string(type)) + ": kept " + std::to_string(tally.kept) + "/" +
                         std::to_string(target) + " after " + std::to_string(tally.attempted) + " attempts");
      }
    }
    if (result.aborted) break;
  }
  return result;
}

inline Json dataset_manifest(const BuildResult& result, const DatasetConfig& config, const BuildOptions& options,
                             const std::string& jsonl) {
  const PromptTemplates templates = prompt_templates_for(config.pipeline);
  Json manifest;
  manifest["manifest_version"] = 1;
  manifest["split"] = options.split;
  manifest["seed"] = options.seed;
  manifest["config_sha256"] = dataset_config_hash(config);
  manifest["templates_sha256"] = sha256_hex(templates.problem + '\0' + templates.answer);
  manifest["generation"] = {{"mode", config.generation.mode}, {"model_name", config.generation.model_name}};
  Json plan = Json::object();
  Json types = Json::object();
  Json reasons_total = Json::object();
  for (FilterReason reason : kAllFilterReasons) {
    if (reason != FilterReason::Match) reasons_total[std::string(to_string(reason))] = 0;
  }
  std::size_t kept = 0, attempted = 0, dropped = 0, overlap = 0;
  for (const auto& [type, tally] : result.tallies) {
    const std::string name(to_string(type));
    plan[name] = tally.target;
    Json reasons = Json::object();
    for (FilterReason reason : kAllFilterReasons) {
      if (reason == FilterReason::Match) continue;
      const auto it = tally.drops.find(reason);
      const std::size_t count = it == tally.drops.end() ? 0 : it->second;
      reasons[std::string(to_string(reason))] = count;
      reasons_total[std::string(to_string(reason))] = reasons_total[std::string(to_string(reason))].get<std::size_t>() + count;
    }
    types[name] = {{"target", tally.target},
                   {"kept", tally.kept},
                   {"attempted", tally.attempted},
                   {"dropped", tally.dropped()},
                   {"overlap_skipped", tally.overlap_skipped},
                   {"drop_reasons", reasons}};
    kept += tally.kept;
    attempted += tally.attempted;
    dropped += tally.dropped();
    overlap += tally.overlap_skipped;
  }
  manifest["plan"] = plan;
  manifest["types"] = types;
  manifest["totals"] = {{"kept", kept}, {"attempted", attempted}, {"dropped", dropped}, {"overlap_skipped", overlap}};
  manifest["drop_reasons"] = reasons_total;
  manifest["records"] = result.records.size();
  manifest["jsonl_sha256"] = sha256_hex(jsonl);
  manifest["complete"] = !result.aborted;
  manifest["abort_reason"] = result.aborted ? Json(result.abort_reason) : Json(nullptr);
  Json hashes = Json::array();
  for (const DialogueRecord& record : result.records) hashes.push_back(record.meta.instance_sha256);
  manifest["instance_hashes"] = std::move(hashes);
  return manifest;
}

// Instance hashes recorded by a manifest (for the overlap guard).
inline std::set<std::string> manifest_instance_hashes(const Json& manifest, const std::string& path = "manifest") {
  const Json& list = detail::as_array(detail::field(manifest, "instance_hashes", path), path + ".instance_hashes");
  std::set<std::string> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    out.insert(detail::as_string(list[i], detail::child(path + ".instance_hashes", i)));
  }
  return out;
}

}  // namespace opsynth
