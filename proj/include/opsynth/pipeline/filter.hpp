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

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "opsynth/core/number_format.hpp"
#include "opsynth/toolcall/dispatch.hpp"
#include "opsynth/toolcall/parser.hpp"

namespace opsynth {

enum class FilterReason { Match, ObjectiveMismatch, CallExecutionError, NoCallFound, ParseError, GenerationError };

inline constexpr std::array<FilterReason, 6> kAllFilterReasons = {
    FilterReason::Match,       FilterReason::ObjectiveMismatch, FilterReason::CallExecutionError,
    FilterReason::NoCallFound, FilterReason::ParseError,        FilterReason::GenerationError};

inline constexpr std::string_view to_string(FilterReason reason) {
  switch (reason) {
    case FilterReason::Match: return "match";
    case FilterReason::ObjectiveMismatch: return "objective_mismatch";
    case FilterReason::CallExecutionError: return "call_execution_error";
    case FilterReason::NoCallFound: return "no_call_found";
    case FilterReason::ParseError: return "parse_error";
    case FilterReason::GenerationError: return "generation_error";
  }
  return "?";
}

inline std::optional<FilterReason> parse_filter_reason(std::string_view text) {
  for (FilterReason reason : kAllFilterReasons) {
    if (to_string(reason) == text) return reason;
  }
  return std::nullopt;
}

struct FilterVerdict {
  bool kept = false;
  FilterReason reason = FilterReason::GenerationError;
  std::optional<double> generated_objective;
  std::string detail;  // human-readable cause of a drop
  std::optional<ToolCall> call;

  static FilterVerdict generation_error(std::string message) {
    return {false, FilterReason::GenerationError, std::nullopt, std::move(message), std::nullopt};
  }
};

// Outcome of running the last call in `text` and comparing its objective with
// any of `acceptable` (each within objective_tolerance of itself).
inline FilterVerdict check_call_output(std::string_view text, const std::vector<double>& acceptable,
                                       const SolverConfig& config = {},
                                       const ToolRegistry& registry = builtin_registry()) {
  FilterVerdict verdict;
  try {
    verdict.call = extract_call(text, registry);
  } catch (const CallParseError& e) {
    verdict.reason = e.kind() == CallErrorKind::NoCall ? FilterReason::NoCallFound : FilterReason::ParseError;
    verdict.detail = e.what();
    return verdict;
  }
  const SolverResult result = dispatch(*verdict.call, config, registry);
  if (!result.is_optimal()) {
    verdict.reason = FilterReason::CallExecutionError;
    verdict.detail = std::string(to_string(result.status)) + (result.message ? ": " + *result.message : "");
    return verdict;
  }
  verdict.generated_objective = result.objective;
  for (double expected : acceptable) {
    if (objectives_match(expected, *result.objective)) {
      verdict.kept = true;
      verdict.reason = FilterReason::Match;
      return verdict;
    }
  }
  verdict.reason = FilterReason::ObjectiveMismatch;
  verdict.detail = "call reaches " + format_number(*result.objective);
  return verdict;
}

// Keeps an answer iff its call dispatches to an optimum matching the ground
// truth. Only objectives are compared; alternate optimal solutions pass.
inline FilterVerdict filter_pair(const KeyInfo& info, std::string_view answer, const SolverConfig& config = {},
                                 const ToolRegistry& registry = builtin_registry()) {
  if (!info.ground_truth.is_optimal()) {
    return {false, FilterReason::CallExecutionError, std::nullopt, "ground truth is not optimal", std::nullopt};
  }
  return check_call_output(answer, {*info.ground_truth.objective}, config, registry);
}

}  // namespace opsynth
