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

// The dataset configuration file: JSON with comments, four sections
// (sampler, solver, generation, pipeline). Absent keys keep defaults.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "opsynth/genclient/client.hpp"
#include "opsynth/genclient/mock.hpp"
#include "opsynth/renderer/prompts.hpp"
#include "opsynth/sampler/config.hpp"

namespace opsynth {

struct GenerationSettings {
  std::string mode = "mock";  // "mock" or "live"
  std::string endpoint;
  std::string model_name;
  double temperature = 0.7;
  int max_output_tokens = 2048;
  int max_in_flight = 8;
  int timeout_seconds = 120;
  RetryPolicy retry;
  MockConfig mock;

  bool operator==(const GenerationSettings&) const = default;
};

struct PipelineSettings {
  // Attempts processed per round; results do not depend on it.
  int chunk_size = 256;
  // Abort when this many attempts in a row fail at the generation step.
  int max_consecutive_generation_failures = 100;
  // Abort a type after target * factor + 100 attempts without reaching it.
  int max_attempts_factor = 20;
  // Prompt template directory; empty uses the built-in templates. Relative
  // paths are resolved against the configuration file's directory.
  std::string templates_dir;
  std::string templates_version = "v1";

  bool operator==(const PipelineSettings&) const = default;
};

struct DatasetConfig {
  SamplerConfig sampler = default_sampler_config();  // includes the solver section
  GenerationSettings generation;
  PipelineSettings pipeline;

  bool operator==(const DatasetConfig&) const = default;
};

inline Json generation_settings_to_json(const GenerationSettings& g) {
  return {{"mode", g.mode},
          {"endpoint", g.endpoint},
          {"model_name", g.model_name},
          {"temperature", g.temperature},
          {"max_output_tokens", g.max_output_tokens},
          {"max_in_flight", g.max_in_flight},
          {"timeout_seconds", g.timeout_seconds},
          {"retry",
           {{"max_retries", g.retry.max_retries},
            {"initial_backoff_ms", g.retry.initial_backoff_ms},
            {"multiplier", g.retry.multiplier},
            {"max_backoff_ms", g.retry.max_backoff_ms}}},
          {"mock", {{"corruption", g.mock.corruption}, {"seed", g.mock.seed}}}};
}

inline Json pipeline_settings_to_json(const PipelineSettings& p) {
  return {{"chunk_size", p.chunk_size},
          {"max_consecutive_generation_failures", p.max_consecutive_generation_failures},
          {"max_attempts_factor", p.max_attempts_factor},
          {"templates_dir", p.templates_dir},
          {"templates_version", p.templates_version}};
}

inline Json dataset_config_to_json(const DatasetConfig& config) {
  return {{"sampler", sampler_config_to_json(config.sampler)},
          {"solver", solver_config_to_json(config.sampler.solver)},
          {"generation", generation_settings_to_json(config.generation)},
          {"pipeline", pipeline_settings_to_json(config.pipeline)}};
}

// Hash of the settings that can change the produced records. Scheduling knobs
// (chunk_size, max_in_flight) do not affect output, and the templates
// directory is machine-specific (the manifest hashes the template text).
inline std::string dataset_config_hash(const DatasetConfig& config) {
  Json all = dataset_config_to_json(config);
  all["pipeline"].erase("chunk_size");
  all["pipeline"].erase("templates_dir");
  all["generation"].erase("max_in_flight");
  return sha256_hex(all.dump());
}

namespace detail {

inline std::uint64_t as_u64(const Json& value, const std::string& path) {
  if (!value.is_number_unsigned()) throw FormatError(path, "expected a nonnegative integer");
  return value.get<std::uint64_t>();
}

inline GenerationSettings generation_settings_from_json(const Json& object, const std::string& path) {
  GenerationSettings g;
  reject_unknown_keys(object, path,
                      {"mode", "endpoint", "model_name", "temperature", "max_output_tokens", "max_in_flight",
                       "timeout_seconds", "retry", "mock"});
  read_optional(object, "mode", path, g.mode, as_string);
  read_optional(object, "endpoint", path, g.endpoint, as_string);
  read_optional(object, "model_name", path, g.model_name, as_string);
  read_optional(object, "temperature", path, g.temperature, as_number);
  read_optional(object, "max_output_tokens", path, g.max_output_tokens, as_int);
  read_optional(object, "max_in_flight", path, g.max_in_flight, as_int);
  read_optional(object, "timeout_seconds", path, g.timeout_seconds, as_int);
  if (auto it = object.find("retry"); it != object.end()) {
    const std::string p = child(path, "retry");
    reject_unknown_keys(*it, p, {"max_retries", "initial_backoff_ms", "multiplier", "max_backoff_ms"});
    read_optional(*it, "max_retries", p, g.retry.max_retries, as_int);
    read_optional(*it, "initial_backoff_ms", p, g.retry.initial_backoff_ms, as_number);
    read_optional(*it, "multiplier", p, g.retry.multiplier, as_number);
    read_optional(*it, "max_backoff_ms", p, g.retry.max_backoff_ms, as_number);
  }
  if (auto it = object.find("mock"); it != object.end()) {
    const std::string p = child(path, "mock");
    reject_unknown_keys(*it, p, {"corruption", "seed"});
    read_optional(*it, "corruption", p, g.mock.corruption, as_number);
    read_optional(*it, "seed", p, g.mock.seed, as_u64);
  }
  return g;
}

inline PipelineSettings pipeline_settings_from_json(const Json& object, const std::string& path) {
  PipelineSettings s;
  reject_unknown_keys(object, path,
                      {"chunk_size", "max_consecutive_generation_failures", "max_attempts_factor", "templates_dir",
                       "templates_version"});
  read_optional(object, "chunk_size", path, s.chunk_size, as_int);
  read_optional(object, "max_consecutive_generation_failures", path, s.max_consecutive_generation_failures, as_int);
  read_optional(object, "max_attempts_factor", path, s.max_attempts_factor, as_int);
  read_optional(object, "templates_dir", path, s.templates_dir, as_string);
  read_optional(object, "templates_version", path, s.templates_version, as_string);
  return s;
}

}  // namespace detail

inline DatasetConfig dataset_config_from_json(const Json& object) {
  using namespace detail;
  reject_unknown_keys(object, "", {"sampler", "solver", "generation", "pipeline"});
  DatasetConfig config;
  if (auto it = object.find("sampler"); it != object.end()) {
    config.sampler = sampler_config_from_json(*it, "sampler");
  }
  if (auto it = object.find("solver"); it != object.end()) config.sampler.solver = solver_config_from_json(*it);
  if (auto it = object.find("generation"); it != object.end()) {
    config.generation = generation_settings_from_json(*it, "generation");
  }
  if (auto it = object.find("pipeline"); it != object.end()) {
    config.pipeline = pipeline_settings_from_json(*it, "pipeline");
  }
  return config;
}

inline std::vector<std::string> dataset_config_violations(const DatasetConfig& config) {
  std::vector<std::string> out = sampler_config_violations(config.sampler);
  const GenerationSettings& g = config.generation;
  if (g.mode != "mock" && g.mode != "live") out.push_back("generation.mode: must be \"mock\" or \"live\"");
  if (!(g.temperature >= 0.0 && g.temperature <= 2.0)) out.push_back("generation.temperature: must lie in [0, 2]");
  if (g.max_output_tokens <= 0) out.push_back("generation.max_output_tokens: must be positive");
  if (g.max_in_flight < 1) out.push_back("generation.max_in_flight: must be at least 1");
  if (g.timeout_seconds <= 0) out.push_back("generation.timeout_seconds: must be positive");
  if (g.retry.max_retries < 0) out.push_back("generation.retry.max_retries: must be nonnegative");
  if (!(g.retry.initial_backoff_ms >= 0)) out.push_back("generation.retry.initial_backoff_ms: must be nonnegative");
  if (!(g.retry.multiplier >= 1)) out.push_back("generation.retry.multiplier: must be at least 1");
  if (!(g.retry.max_backoff_ms >= 0)) out.push_back("generation.retry.max_backoff_ms: must be nonnegative");
  if (!(g.mock.corruption >= 0.0 && g.mock.corruption <= 1.0)) {
    out.push_back("generation.mock.corruption: must lie in [0, 1]");
  }
  const PipelineSettings& p = config.pipeline;
  if (p.chunk_size < 1) out.push_back("pipeline.chunk_size: must be at least 1");
  if (p.max_consecutive_generation_failures < 1) {
    out.push_back("pipeline.max_consecutive_generation_failures: must be at least 1");
  }
  if (p.max_attempts_factor < 1) out.push_back("pipeline.max_attempts_factor: must be at least 1");
  return out;
}

// Reads a configuration file (comments allowed). Syntax errors name the line
// and column; field errors name the dotted path. Violations are reported
// together.
inline DatasetConfig load_dataset_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::exception&) {
    throw ConfigError("cannot read configuration file " + path.string());
  }
  Json object;
  try {
    object = Json::parse(text, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    std::string what = e.what();
    if (const std::size_t bracket = what.find("] "); what.starts_with("[json.exception") && bracket != std::string::npos) {
      what = what.substr(bracket + 2);
    }
    throw ConfigError(path.string() + ": " + what);
  }
  DatasetConfig config;
  try {
    config = dataset_config_from_json(object);
  } catch (const FormatError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  const auto violations = dataset_config_violations(config);
  if (!violations.empty()) {
    std::string message = path.string() + ": invalid configuration";
    for (const auto& v : violations) message += "\n  " + v;
    throw ConfigError(message);
  }
  if (!config.pipeline.templates_dir.empty()) {
    std::filesystem::path dir(config.pipeline.templates_dir);
    if (dir.is_relative()) dir = path.parent_path() / dir;
    config.pipeline.templates_dir = dir.lexically_normal().string();
  }
  return config;
}

inline PromptTemplates prompt_templates_for(const PipelineSettings& settings) {
  if (settings.templates_dir.empty()) return PromptTemplates{};
  return load_prompt_templates(settings.templates_dir, settings.templates_version);
}

}  // namespace opsynth
