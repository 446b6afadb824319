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

// Offline generation client. Problem prompts are answered from the key
// information block inside the prompt itself; answer prompts need the
// request's grounding to know the correct call. All randomness is seeded from
// a hash of the prompt, so equal requests give equal responses.

#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "opsynth/core/hash.hpp"
#include "opsynth/core/rng.hpp"
#include "opsynth/genclient/client.hpp"
#include "opsynth/renderer/render.hpp"
#include "opsynth/toolcall/dispatch.hpp"
#include "opsynth/toolcall/serialize.hpp"

namespace opsynth {

struct MockConfig {
  // Probability that an answer's call has one numeric argument perturbed.
  double corruption = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const MockConfig&) const = default;
};

namespace detail {

inline RngStream prompt_stream(std::string_view prompt, std::uint64_t seed) {
  const Sha256Digest digest = sha256(prompt);
  std::uint64_t word = 0;
  for (int i = 0; i < 8; ++i) word |= static_cast<std::uint64_t>(digest[i]) << (8 * i);
  return RngStream(seed, word);
}

template <std::size_t N>
const char* pick(RngStream& rng, const std::array<const char*, N>& options) {
  return options[rng.uniform_index(N)];
}

inline std::string lower_first(std::string text) {
  if (!text.empty() && text[0] >= 'A' && text[0] <= 'Z') text[0] = static_cast<char>(text[0] - 'A' + 'a');
  return text;
}

// Rendered key information without its first (header) line.
inline std::string data_block(KeyInfo info, RenderFormat format) {
  info.render_format = format;
  std::string text = render_key_info(info);
  const std::size_t newline = text.find('\n');
  return newline == std::string::npos ? text : text.substr(newline + 1);
}

inline std::string mapping_paragraph(const KeyInfo& info) {
  std::string out;
  std::visit(
      [&](const auto& data) {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, LpInstance>) {
          const bool maximize = data.direction == ObjectiveDirection::Maximize;
          out += "Each decision variable gives one entry of c and one column of A. ";
          out += std::string("The goal is to ") + (maximize ? "maximize" : "minimize") + ", so objective=\"" +
                 (maximize ? "max" : "min") + "\". ";
          out += "Every constraint becomes one row of A together with its sense and its entry of b. ";
          out += integrality_sentence(data);
          if (info.type() == ProblemType::MILP) out += " The integer flags record which variables are integer.";
        } else if constexpr (std::is_same_v<T, TspInstance>) {
          out += "Cities are numbered in label order, so City A is index 0. ";
          out += "dist[i][j] is the travel cost from city i to city j and the diagonal is zero. ";
          out += "The tour must return to its starting city.";
        } else if constexpr (std::is_same_v<T, MaxFlowInstance>) {
          out += "Nodes are numbered in label order, so Node A is index 0. ";
          out += "Every link becomes an arc [from, to, capacity], and source and sink are the node indices of "
                 "the start and the end of the flow.";
        } else if constexpr (std::is_same_v<T, AssignmentInstance>) {
          const bool maximize = data.direction == ObjectiveDirection::Maximize;
          out += "Agents are the rows and tasks are the columns of the cost matrix. ";
          out += std::string("Each entry is the ") + (maximize ? "value" : "cost") +
                 " of one pairing, so objective=\"" + (maximize ? "max" : "min") + "\".";
        } else {
          out += "Nodes are numbered in label order, so Node A is index 0. ";
          out += "Every link becomes an arc [from, to, capacity, unit_cost]. ";
          out += "Supplies are positive at supply nodes, negative at demand nodes and zero elsewhere, so they "
                 "sum to zero.";
        }
      },
      info.instance.data);
  return out;
}

inline bool is_perturbable(const std::string& param, std::size_t depth_index) {
  if (param == "c" || param == "A" || param == "b" || param == "dist" || param == "cost") return true;
  return param == "arcs" && depth_index >= 2;  // capacity and unit cost, not endpoints
}

inline void collect_leaves(Value& value, const std::string& param, std::size_t index, std::vector<Value*>& out) {
  if (value.is_array()) {
    auto& items = value.array();
    for (std::size_t i = 0; i < items.size(); ++i) collect_leaves(items[i], param, i, out);
  } else if (value.is_number() && is_perturbable(param, index) && !(param == "dist" && value.number() == 0.0)) {
    out.push_back(&value);
  }
}

inline void collect_call_leaves(ToolCall& call, std::vector<Value*>& out) {
  for (auto& [name, value] : call.args) {
    if (name != "arcs") {
      collect_leaves(value, name, 0, out);
      continue;
    }
    for (Value& arc : value.array()) collect_leaves(arc, name, 0, out);
  }
}

inline void scale_leaf(Value& leaf) {
  const double old = leaf.number();
  leaf = old == 0.0 ? 1.0 : std::round(old * 110.0) / 100.0;
}

// Scales one data leaf by 1.1 (rounded to cents) so that the call no longer
// reaches the optimum. Leaves are tried in a random order until one works;
// returns false if none does. TSP distances are scaled together with their
// mirror, since a one-sided change is dodged by running the tour backwards.
inline bool corrupt_call(ToolCall& call, const KeyInfo& info, RngStream& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> moves;
  if (call.name == "solve_tsp") {
    const std::size_t n = call.args.front().second.array().size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) moves.emplace_back(i, j);
    }
  } else {
    std::vector<Value*> leaves;
    collect_call_leaves(call, leaves);
    for (std::size_t k = 0; k < leaves.size(); ++k) moves.emplace_back(k, 0);
  }
  rng.shuffle(std::span(moves));
  for (const auto& [a, b] : moves) {
    ToolCall candidate = call;
    if (candidate.name == "solve_tsp") {
      auto& rows = candidate.args.front().second.array();
      scale_leaf(rows[a].array()[b]);
      scale_leaf(rows[b].array()[a]);
    } else {
      std::vector<Value*> leaves;
      collect_call_leaves(candidate, leaves);
      scale_leaf(*leaves[a]);
    }
    const SolverResult result = dispatch(candidate);
    if (!result.is_optimal() || !objectives_match(*info.ground_truth.objective, *result.objective)) {
      call = std::move(candidate);
      return true;
    }
  }
  return false;
}

inline std::string extract_after(const std::string& text, const std::string& marker) {
  const std::size_t at = text.rfind(marker);
  return at == std::string::npos ? std::string() : text.substr(at + marker.size());
}

inline std::string trim(std::string text) {
  const auto space = [](char ch) { return ch == ' ' || ch == '\n' || ch == '\t' || ch == '\r'; };
  while (!text.empty() && space(text.back())) text.pop_back();
  std::size_t start = 0;
  while (start < text.size() && space(text[start])) ++start;
  return text.substr(start);
}

}  // namespace detail

class MockClient : public GenerationClient {
 public:
  explicit MockClient(MockConfig config = {}) : config_(config) {}

  GenResponse generate(const GenRequest& request) override {
    if (auto problem = request_problem(request)) return GenResponse::failure(GenErrorKind::InvalidRequest, *problem);
    const bool answer_stage = request.grounding && request.grounding->stage == GenStage::Answer;
    GenResponse response;
    if (answer_stage) {
      response = answer(request);
    } else {
      response = statement(request);
    }
    if (!response.ok()) return response;
    response.usage.prompt_tokens = estimate_tokens(request.prompt);
    // Honour the output budget the way a provider would: cut and say so.
    const std::size_t budget = static_cast<std::size_t>(request.max_output_tokens) * 4;
    if (response.text.size() > budget) {
      response.text.resize(budget);
      response.finish_reason = FinishReason::Length;
    }
    response.usage.output_tokens = estimate_tokens(response.text);
    return response;
  }

  const MockConfig& config() const { return config_; }

 private:
  GenResponse statement(const GenRequest& request) const {
    std::string key = detail::trim(detail::extract_after(request.prompt, "Key information:\n"));
    std::string context = detail::extract_after(request.prompt.substr(0, request.prompt.find('\n')), "for the ");
    if (const std::size_t end = context.find(" industry"); end != std::string::npos) context.resize(end);
    if (request.grounding) {
      key = detail::trim(render_key_info(request.grounding->info));
      context = request.grounding->info.context;
    }
    if (key.empty()) {
      return GenResponse::failure(GenErrorKind::InvalidRequest, "prompt carries no key information block");
    }
    if (context.empty()) context = "operations";
    RngStream rng = detail::prompt_stream(request.prompt, config_.seed);
    static constexpr std::array<const char*, 4> openers = {
        "A planning team in the {} sector has to settle next period's plan.",
        "Managers working in {} are preparing an operating decision.",
        "An analyst supporting a business in {} has been handed the following planning task.",
        "The operations office of a firm in the {} sector is reviewing its options."};
    static constexpr std::array<const char*, 3> closers = {
        "What decisions should the team make, and what is the best achievable objective value?",
        "Determine the optimal plan and report its objective value.",
        "Which plan is optimal, and what objective value does it reach?"};
    std::string opener = detail::pick(rng, openers);
    opener.replace(opener.find("{}"), 2, context);
    GenResponse out;
    out.text = opener + " All figures below come from their records.\n\n" + key + "\n\n" + detail::pick(rng, closers);
    out.finish_reason = FinishReason::Complete;
    return out;
  }

  GenResponse answer(const GenRequest& request) const {
    const KeyInfo& info = request.grounding->info;
    if (!info.ground_truth.is_optimal()) {
      return GenResponse::failure(GenErrorKind::InvalidRequest, "grounding has no optimal ground truth");
    }
    RngStream rng = detail::prompt_stream(request.prompt, config_.seed);
    ToolCall call = ground_truth_call(info);
    if (rng.bernoulli(config_.corruption)) detail::corrupt_call(call, info, rng);
    static constexpr std::array<const char*, 3> openers = {
        "Let me work through the problem step by step.", "I will map the problem onto the solver API.",
        "First I identify what has to be decided."};
    static constexpr std::array<const char*, 3> closers = {
        "All parameters are in place, so the call is:", "Putting the pieces together gives the call:",
        "The final API call is:"};
    const ToolSchema& schema = builtin_registry().for_type(info.type());
    std::string text = detail::pick(rng, openers);
    text += "\nThe statement describes a " + detail::lower_first(problem_type_title(info.type())) + " set in " +
            info.context + " with the aim of " + info.objective_flavor + ", so the right tool is " + schema.name +
            ".\n";
    text += detail::mapping_paragraph(info) + "\n";
    text += "Reading the data from the statement:\n" + detail::trim(detail::data_block(info, RenderFormat::Matrix));
    text += "\n" + std::string(detail::pick(rng, closers)) + "\n" + serialize_call(call);
    GenResponse out;
    out.text = std::move(text);
    out.finish_reason = FinishReason::Complete;
    return out;
  }

  MockConfig config_;
};

}  // namespace opsynth
