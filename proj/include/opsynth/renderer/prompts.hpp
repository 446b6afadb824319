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

// Prompt construction for the two generation stages. The embedded templates
// are byte-identical copies of data/templates/*_v1.txt (checked by a test).

#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "opsynth/renderer/render.hpp"

namespace opsynth {

inline constexpr std::string_view kProblemPromptTemplate =
    R"(You are writing operations research exercises for the {context} industry.

Below is the key information of one optimization problem. Write a self-contained, realistic problem statement set in the {context} industry that a reader could model and solve without seeing this note.

Requirements:
- Use every number exactly as given; do not add, drop, round or change any value.
- Give the decision variables, the objective and the constraints plausible real-world names.
- Describe the situation in natural language; do not mention matrices, vectors or solver names.
- End with the question the decision maker wants answered.
- Output only the problem statement.

Key information:
{key_information}
)";

inline constexpr std::string_view kAnswerPromptTemplate =
    R"(You solve operations research problems by calling a solver API.

API usage:
{api_doc}

Problem:
{statement}

Explain how the problem maps onto the API: identify the decision variables, the objective and every constraint, and state the parameter values you will pass.
Reason step by step, then finish with exactly one API call on its own final line, written as tool_name(parameter=value, ...).
)";

// Every answer prompt ends with this line.
inline constexpr std::string_view kAnswerPromptSuffix =
    "Reason step by step, then finish with exactly one API call on its own final line, written as "
    "tool_name(parameter=value, ...).";

struct PromptTemplates {
  std::string problem{kProblemPromptTemplate};
  std::string answer{kAnswerPromptTemplate};
  std::string version = "v1";
};

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Loads problem_prompt_<version>.txt and answer_prompt_<version>.txt.
inline PromptTemplates load_prompt_templates(const std::filesystem::path& dir, const std::string& version = "v1") {
  PromptTemplates out;
  out.problem = read_text_file(dir / ("problem_prompt_" + version + ".txt"));
  out.answer = read_text_file(dir / ("answer_prompt_" + version + ".txt"));
  out.version = version;
  return out;
}

// Replaces each {name} whose name is a key of `values`. Single pass: text
// coming from a value is never rescanned, so braces inside it survive.
inline std::string substitute_placeholders(std::string_view text, const std::map<std::string, std::string>& values) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{') {
      const std::size_t close = text.find('}', i + 1);
      if (close != std::string_view::npos) {
        auto it = values.find(std::string(text.substr(i + 1, close - i - 1)));
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += text[i++];
  }
  return out;
}

inline std::string trim_trailing(std::string text) {
  while (!text.empty() && (text.back() == ' ' || text.back() == '\n' || text.back() == '\t' || text.back() == '\r')) {
    text.pop_back();
  }
  return text;
}

inline std::string build_problem_prompt(const KeyInfo& info, const PromptTemplates& templates = {}) {
  return trim_trailing(substitute_placeholders(
      templates.problem, {{"context", info.context}, {"key_information", trim_trailing(render_key_info(info))}}));
}

// The statement must be nonempty; an empty tool doc is allowed.
inline std::string build_answer_prompt(std::string_view tool_doc, std::string_view statement,
                                       const PromptTemplates& templates = {}) {
  if (trim_trailing(std::string(statement)).empty()) {
    throw std::invalid_argument("answer prompt needs a nonempty problem statement");
  }
  return trim_trailing(substitute_placeholders(
      templates.answer,
      {{"api_doc", trim_trailing(std::string(tool_doc))}, {"statement", trim_trailing(std::string(statement))}}));
}

}  // namespace opsynth
