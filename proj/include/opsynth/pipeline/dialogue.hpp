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

// Dialogue records: one system message listing four tools (the correct one
// and three distractors), the problem statement and the assistant answer.

#pragma once

#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "opsynth/core/json_io.hpp"
#include "opsynth/core/rng.hpp"
#include "opsynth/core/tool_schema.hpp"
#include "opsynth/pipeline/filter.hpp"

namespace opsynth {

inline constexpr std::size_t kDistractorCount = 3;

inline constexpr std::string_view kSystemPreamble =
    "You are an operations research assistant with access to the solver tools below. Pick the tool that fits "
    "the user's problem, reason step by step, and end your reply with exactly one call on its own line, "
    "written as tool_name(parameter=value, ...).\n"
    "Available tools (JSON schemas):\n";

// Three distinct schemas other than `correct`, uniformly without replacement.
inline std::vector<ToolSchema> select_distractors(const ToolSchema& correct, const ToolRegistry& registry,
                                                  RngStream& rng) {
  std::vector<const ToolSchema*> pool;
  for (const ToolSchema& schema : registry.schemas()) {
    if (schema.name != correct.name) pool.push_back(&schema);
  }
  if (pool.size() < kDistractorCount) {
    throw std::invalid_argument("registry needs at least " + std::to_string(kDistractorCount + 1) +
                                " tools to draw distractors, has " + std::to_string(registry.size()));
  }
  // Partial Fisher-Yates: the first three slots become a uniform sample.
  std::vector<ToolSchema> out;
  for (std::size_t k = 0; k < kDistractorCount; ++k) {
    const std::size_t pick = k + rng.uniform_index(pool.size() - k);
    std::swap(pool[k], pool[pick]);
    out.push_back(*pool[k]);
  }
  return out;
}

// The correct tool plus three distractors, in shuffled presentation order.
inline std::vector<ToolSchema> choose_tools(const ToolSchema& correct, const ToolRegistry& registry, RngStream& rng) {
  std::vector<ToolSchema> tools = select_distractors(correct, registry, rng);
  tools.push_back(correct);
  rng.shuffle(std::span(tools));
  return tools;
}

inline std::string system_message(const std::vector<ToolSchema>& tools) {
  Json schemas = Json::array();
  for (const ToolSchema& schema : tools) schemas.push_back(schema_to_json(schema));
  return std::string(kSystemPreamble) + schemas.dump();
}

struct DialogueMeta {
  std::string id;  // "<TYPE>-<attempt>"
  ProblemType problem_type = ProblemType::LP;
  std::string context;
  std::string objective_flavor;
  RenderFormat render_format = RenderFormat::FreeText;
  std::uint64_t seed = 0;
  std::uint64_t seed_index = 0;  // stream index the key information was drawn from
  double ground_truth_objective = 0.0;
  std::string tool;
  std::string instance_sha256;

  bool operator==(const DialogueMeta&) const = default;
};

struct DialogueRecord {
  std::string system;
  std::string user;
  std::string assistant;
  DialogueMeta meta;

  bool operator==(const DialogueRecord&) const = default;
};

inline std::string record_id(ProblemType type, std::uint64_t attempt) {
  return std::string(to_string(type)) + "-" + std::to_string(attempt);
}

// Draws the tool lineup from `rng` and assembles the record. The caller has
// already checked the answer with filter_pair.
inline DialogueRecord format_dialogue(const KeyInfo& info, const std::string& statement, const std::string& answer,
                                      const ToolRegistry& registry, RngStream& rng, std::uint64_t seed,
                                      std::uint64_t seed_index, std::uint64_t attempt) {
  const ToolSchema& correct = registry.for_type(info.type());
  DialogueRecord record;
  record.system = system_message(choose_tools(correct, registry, rng));
  record.user = statement;
  record.assistant = answer;
  DialogueMeta& meta = record.meta;
  meta.id = record_id(info.type(), attempt);
  meta.problem_type = info.type();
  meta.context = info.context;
  meta.objective_flavor = info.objective_flavor;
  meta.render_format = info.render_format;
  meta.seed = seed;
  meta.seed_index = seed_index;
  meta.ground_truth_objective = *info.ground_truth.objective;
  meta.tool = correct.name;
  meta.instance_sha256 = instance_hash(info.instance);
  return record;
}

inline Json dialogue_to_json(const DialogueRecord& record) {
  Json messages = Json::array();
  messages.push_back({{"role", "system"}, {"content", record.system}});
  messages.push_back({{"role", "user"}, {"content", record.user}});
  messages.push_back({{"role", "assistant"}, {"content", record.assistant}});
  const DialogueMeta& m = record.meta;
  Json meta = {{"id", m.id},
               {"problem_type", std::string(to_string(m.problem_type))},
               {"context", m.context},
               {"objective_flavor", m.objective_flavor},
               {"render_format", std::string(to_string(m.render_format))},
               {"seed", m.seed},
               {"seed_index", m.seed_index},
               {"ground_truth_objective", m.ground_truth_objective},
               {"tool", m.tool},
               {"instance_sha256", m.instance_sha256}};
  return {{"messages", std::move(messages)}, {"meta", std::move(meta)}};
}

inline DialogueRecord dialogue_from_json(const Json& object, const std::string& path = "") {
  using namespace detail;
  DialogueRecord record;
  const Json& messages = as_array(field(object, "messages", path), child(path, "messages"));
  static constexpr std::array<std::string_view, 3> roles = {"system", "user", "assistant"};
  if (messages.size() != roles.size()) throw FormatError(child(path, "messages"), "expected 3 messages");
  std::array<std::string*, 3> targets = {&record.system, &record.user, &record.assistant};
  for (std::size_t i = 0; i < roles.size(); ++i) {
    const std::string p = child(child(path, "messages"), i);
    const std::string role = as_string(field(messages[i], "role", p), child(p, "role"));
    if (role != roles[i]) throw FormatError(child(p, "role"), "expected \"" + std::string(roles[i]) + "\"");
    *targets[i] = as_string(field(messages[i], "content", p), child(p, "content"));
  }
  const std::string mp = child(path, "meta");
  const Json& meta = field(object, "meta", path);
  DialogueMeta& m = record.meta;
  m.id = as_string(field(meta, "id", mp), child(mp, "id"));
  const std::string type = as_string(field(meta, "problem_type", mp), child(mp, "problem_type"));
  const auto parsed_type = parse_problem_type(type);
  if (!parsed_type) throw FormatError(child(mp, "problem_type"), "unknown problem type \"" + type + "\"");
  m.problem_type = *parsed_type;
  m.context = as_string(field(meta, "context", mp), child(mp, "context"));
  m.objective_flavor = as_string(field(meta, "objective_flavor", mp), child(mp, "objective_flavor"));
  const std::string format = as_string(field(meta, "render_format", mp), child(mp, "render_format"));
  const auto parsed_format = parse_render_format(format);
  if (!parsed_format) throw FormatError(child(mp, "render_format"), "unknown render format \"" + format + "\"");
  m.render_format = *parsed_format;
  const Json& seed = field(meta, "seed", mp);
  const Json& seed_index = field(meta, "seed_index", mp);
  if (!seed.is_number_unsigned()) throw FormatError(child(mp, "seed"), "expected a nonnegative integer");
  if (!seed_index.is_number_unsigned()) throw FormatError(child(mp, "seed_index"), "expected a nonnegative integer");
  m.seed = seed.get<std::uint64_t>();
  m.seed_index = seed_index.get<std::uint64_t>();
  m.ground_truth_objective = as_number(field(meta, "ground_truth_objective", mp), child(mp, "ground_truth_objective"));
  m.tool = as_string(field(meta, "tool", mp), child(mp, "tool"));
  m.instance_sha256 = as_string(field(meta, "instance_sha256", mp), child(mp, "instance_sha256"));
  return record;
}

inline std::string dataset_jsonl(const std::vector<DialogueRecord>& records) {
  std::string out;
  for (const DialogueRecord& record : records) {
    out += dialogue_to_json(record).dump();
    out += '\n';
  }
  return out;
}

// Blank lines are skipped. Throws FormatError with a "line N" path.
inline std::vector<DialogueRecord> parse_dataset_jsonl(std::string_view text) {
  std::vector<DialogueRecord> out;
  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = "line " + std::to_string(line_number);
    Json object = Json::parse(line, nullptr, false);
    if (object.is_discarded()) throw FormatError(where, "not valid JSON");
    out.push_back(dialogue_from_json(object, where));
  }
  return out;
}

// Tool names listed in a system message, or an explanation of why they
// cannot be read.
inline std::vector<std::string> listed_tools(const std::string& system) {
  if (!system.starts_with(kSystemPreamble)) throw std::runtime_error("system message lacks the tool preamble");
  Json tools = Json::parse(system.substr(kSystemPreamble.size()), nullptr, false);
  if (tools.is_discarded() || !tools.is_array()) throw std::runtime_error("tool list is not a JSON array");
  std::vector<std::string> out;
  for (const Json& tool : tools) {
    if (!tool.is_object() || !tool.contains("name") || !tool["name"].is_string()) {
      throw std::runtime_error("tool entry without a name");
    }
    out.push_back(tool["name"].get<std::string>());
  }
  return out;
}

struct AuditIssue {
  std::size_t index = 0;
  std::string id;
  std::string problem;
};

// Re-checks every record: the assistant call must dispatch to the recorded
// objective, and the system message must list four distinct tools including
// the correct one.
inline std::vector<AuditIssue> audit_records(const std::vector<DialogueRecord>& records,
                                             const SolverConfig& config = {},
                                             const ToolRegistry& registry = builtin_registry()) {
  std::vector<AuditIssue> issues;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const DialogueRecord& record = records[i];
    auto report = [&](std::string problem) { issues.push_back({i, record.meta.id, std::move(problem)}); };
    const FilterVerdict verdict =
        check_call_output(record.assistant, {record.meta.ground_truth_objective}, config, registry);
    if (!verdict.kept) {
      report(std::string(to_string(verdict.reason)) + (verdict.detail.empty() ? "" : ": " + verdict.detail));
    } else if (verdict.call->name != record.meta.tool) {
      report("assistant calls " + verdict.call->name + " but the record expects " + record.meta.tool);
    }
    try {
      std::vector<std::string> tools = listed_tools(record.system);
      std::sort(tools.begin(), tools.end());
      if (tools.size() != kDistractorCount + 1 || std::adjacent_find(tools.begin(), tools.end()) != tools.end()) {
        report("system message must list 4 distinct tools");
      } else if (!std::binary_search(tools.begin(), tools.end(), record.meta.tool)) {
        report("system message does not list " + record.meta.tool);
      }
    } catch (const std::exception& e) {
      report(e.what());
    }
  }
  return issues;
}

}  // namespace opsynth
