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

// Execution-accuracy scoring: a prediction is correct when the last call in
// its output dispatches to an optimum matching any acceptable objective.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "opsynth/core/json_io.hpp"
#include "opsynth/core/parallel.hpp"
#include "opsynth/pipeline/dialogue.hpp"
#include "opsynth/pipeline/filter.hpp"
#include "opsynth/toolcall/serialize.hpp"

namespace opsynth {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Prediction {
  std::string id;
  std::string output;
};

struct TruthEntry {
  std::optional<ProblemType> type;  // falls back to the id prefix ("LP-3")
  std::vector<double> objectives;   // any of these counts as correct
};

using GroundTruth = std::map<std::string, TruthEntry>;

struct PredictionVerdict {
  std::string id;
  std::string group;     // problem type name, or "other"
  std::string call;      // the extracted call as written, empty if none
  std::optional<double> objective;
  FilterReason reason = FilterReason::NoCallFound;
  bool matched = false;
  std::string detail;
};

struct GroupAccuracy {
  std::size_t total = 0;
  std::size_t matched = 0;
  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(total); }
};

struct TokenCounting {
  enum class Mode { Whitespace, CharsPerToken };
  Mode mode = Mode::Whitespace;
  double chars_per_token = 4.0;
};

struct TokenStats {
  std::size_t count = 0;
  std::size_t total = 0;
  double mean = 0.0;
  double median = 0.0;
  double p95 = 0.0;
};

struct EvalReport {
  std::vector<PredictionVerdict> verdicts;  // in id order
  std::size_t matched = 0;
  double accuracy = 0.0;
  std::map<std::string, GroupAccuracy> groups;
  std::map<FilterReason, std::size_t> reasons;
  std::optional<TokenStats> tokens;
};

inline std::size_t count_tokens(std::string_view text, const TokenCounting& counting = {}) {
  if (counting.mode == TokenCounting::Mode::CharsPerToken) {
    return static_cast<std::size_t>(std::ceil(static_cast<double>(text.size()) / counting.chars_per_token));
  }
  std::size_t count = 0;
  bool in_word = false;
  for (char ch : text) {
    const bool space = ch == ' ' || ch == '\n' || ch == '\t' || ch == '\r' || ch == '\f' || ch == '\v';
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

// Mean, median (average of the middle pair for even counts) and p95 by the
// nearest-rank rule.
inline TokenStats token_stats(const std::vector<std::string>& outputs, const TokenCounting& counting = {}) {
  if (outputs.empty()) throw std::invalid_argument("token_stats needs at least one output");
  if (counting.mode == TokenCounting::Mode::CharsPerToken && !(counting.chars_per_token > 0)) {
    throw std::invalid_argument("chars_per_token must be positive");
  }
  std::vector<std::size_t> counts;
  counts.reserve(outputs.size());
  for (const std::string& text : outputs) counts.push_back(count_tokens(text, counting));
  std::sort(counts.begin(), counts.end());
  TokenStats stats;
  stats.count = counts.size();
  for (std::size_t c : counts) stats.total += c;
  stats.mean = static_cast<double>(stats.total) / static_cast<double>(stats.count);
  const std::size_t n = counts.size();
  stats.median = n % 2 == 1 ? static_cast<double>(counts[n / 2])
                            : (static_cast<double>(counts[n / 2 - 1]) + static_cast<double>(counts[n / 2])) / 2.0;
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
  stats.p95 = static_cast<double>(counts[std::max<std::size_t>(rank, 1) - 1]);
  return stats;
}

namespace detail {

// "LP-12" sorts before "LP-100"; other ids compare as plain strings.
inline bool id_less(const std::string& a, const std::string& b) {
  auto split = [](const std::string& id) -> std::pair<std::string, std::optional<unsigned long long>> {
    const std::size_t dash = id.rfind('-');
    if (dash == std::string::npos || dash + 1 == id.size()) return {id, std::nullopt};
    unsigned long long value = 0;
    const char* first = id.data() + dash + 1;
    const char* last = id.data() + id.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) return {id, std::nullopt};
    return {id.substr(0, dash), value};
  };
  const auto [pa, na] = split(a);
  const auto [pb, nb] = split(b);
  if (na && nb && pa == pb) return *na < *nb;
  return a < b;
}

inline std::optional<ProblemType> type_from_id(const std::string& id) {
  const std::size_t dash = id.rfind('-');
  if (dash == std::string::npos) return std::nullopt;
  return parse_problem_type(id.substr(0, dash));
}

// Call as written by the model (argument order preserved).
inline std::string call_as_written(const ToolCall& call) {
  std::string out = call.name + "(";
  for (std::size_t i = 0; i < call.args.size(); ++i) {
    if (i) out += ", ";
    out += call.args[i].first + "=" + serialize_value(call.args[i].second);
  }
  return out + ")";
}

}  // namespace detail

// Every prediction id must have ground truth and every ground-truth id must
// have exactly one prediction; otherwise EvalError.
inline EvalReport score_predictions(const std::vector<Prediction>& predictions, const GroundTruth& truth,
                                    const SolverConfig& config = {}, std::size_t jobs = 1,
                                    const TokenCounting& counting = {},
                                    const ToolRegistry& registry = builtin_registry()) {
  std::set<std::string> seen;
  for (const Prediction& p : predictions) {
    if (!truth.contains(p.id)) throw EvalError("unknown instance id " + p.id);
    if (!seen.insert(p.id).second) throw EvalError("duplicate prediction for id " + p.id);
  }
  for (const auto& [id, entry] : truth) {
    if (!seen.contains(id)) throw EvalError("no prediction for id " + id);
  }

  EvalReport report;
  report.verdicts.resize(predictions.size());
  parallel_for(predictions.size(), jobs, [&](std::size_t i) {
    const Prediction& p = predictions[i];
    const TruthEntry& entry = truth.at(p.id);
    const FilterVerdict check = check_call_output(p.output, entry.objectives, config, registry);
    PredictionVerdict& v = report.verdicts[i];
    v.id = p.id;
    const auto type = entry.type ? entry.type : detail::type_from_id(p.id);
    v.group = type ? std::string(to_string(*type)) : "other";
    if (check.call) v.call = detail::call_as_written(*check.call);
    v.objective = check.generated_objective;
    v.reason = check.reason;
    v.matched = check.kept;
    v.detail = check.detail;
  });
  std::sort(report.verdicts.begin(), report.verdicts.end(),
            [](const PredictionVerdict& a, const PredictionVerdict& b) { return detail::id_less(a.id, b.id); });
  for (const PredictionVerdict& v : report.verdicts) {
    GroupAccuracy& group = report.groups[v.group];
    ++group.total;
    if (v.matched) {
      ++group.matched;
      ++report.matched;
    }
    ++report.reasons[v.reason];
  }
  report.accuracy =
      predictions.empty() ? 0.0 : static_cast<double>(report.matched) / static_cast<double>(predictions.size());
  if (!predictions.empty()) {
    std::vector<std::string> outputs;
    for (const Prediction& p : predictions) outputs.push_back(p.output);
    report.tokens = token_stats(outputs, counting);
  }
  return report;
}

// Group names in display order: problem types first, then anything else.
inline std::vector<std::string> ordered_groups(const std::set<std::string>& names) {
  std::vector<std::string> out;
  for (ProblemType type : kAllProblemTypes) {
    if (names.contains(std::string(to_string(type)))) out.emplace_back(to_string(type));
  }
  for (const std::string& name : names) {
    if (!parse_problem_type(name)) out.push_back(name);
  }
  return out;
}

inline std::string percent(double fraction) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(1) << fraction * 100.0 << "%";
  return out.str();
}

inline std::string render_report_table(const EvalReport& report) {
  std::set<std::string> names;
  for (const auto& [name, group] : report.groups) names.insert(name);
  std::ostringstream out;
  out << std::left << std::setw(8) << "Type" << std::right << std::setw(8) << "N" << std::setw(10) << "Matched"
      << std::setw(11) << "Accuracy" << "\n";
  for (const std::string& name : ordered_groups(names)) {
    const GroupAccuracy& g = report.groups.at(name);
    out << std::left << std::setw(8) << name << std::right << std::setw(8) << g.total << std::setw(10) << g.matched
        << std::setw(11) << percent(g.accuracy()) << "\n";
  }
  out << std::left << std::setw(8) << "All" << std::right << std::setw(8) << report.verdicts.size() << std::setw(10)
      << report.matched << std::setw(11) << percent(report.accuracy) << "\n";
  return out.str();
}

inline Json report_to_json(const EvalReport& report) {
  Json verdicts = Json::array();
  for (const PredictionVerdict& v : report.verdicts) {
    verdicts.push_back({{"id", v.id},
                        {"type", v.group},
                        {"call", v.call},
                        {"objective", v.objective ? Json(*v.objective) : Json(nullptr)},
                        {"reason", std::string(to_string(v.reason))},
                        {"matched", v.matched},
                        {"detail", v.detail}});
  }
  Json groups = Json::object();
  std::set<std::string> names;
  for (const auto& [name, group] : report.groups) names.insert(name);
  for (const std::string& name : ordered_groups(names)) {
    const GroupAccuracy& g = report.groups.at(name);
    groups[name] = {{"total", g.total}, {"matched", g.matched}, {"accuracy", g.accuracy()}};
  }
  Json reasons = Json::object();
  for (const auto& [reason, count] : report.reasons) reasons[std::string(to_string(reason))] = count;
  Json out = {{"total", report.verdicts.size()},
              {"matched", report.matched},
              {"accuracy", report.accuracy},
              {"by_type", groups},
              {"reasons", reasons}};
  if (report.tokens) {
    out["token_stats"] = {{"counting", "whitespace"},
                          {"count", report.tokens->count},
                          {"total", report.tokens->total},
                          {"mean", report.tokens->mean},
                          {"median", report.tokens->median},
                          {"p95", report.tokens->p95}};
  }
  out["verdicts"] = std::move(verdicts);
  return out;
}

// Rebuilds the parts of a report needed for comparison from its JSON form.
inline EvalReport report_from_json(const Json& object, const std::string& path = "report") {
  using namespace detail;
  EvalReport report;
  const Json& verdicts = as_array(field(object, "verdicts", path), child(path, "verdicts"));
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const std::string p = child(child(path, "verdicts"), i);
    PredictionVerdict v;
    v.id = as_string(field(verdicts[i], "id", p), child(p, "id"));
    v.group = as_string(field(verdicts[i], "type", p), child(p, "type"));
    v.matched = as_bool(field(verdicts[i], "matched", p), child(p, "matched"));
    const std::string reason = as_string(field(verdicts[i], "reason", p), child(p, "reason"));
    const auto parsed = parse_filter_reason(reason);
    if (!parsed) throw FormatError(child(p, "reason"), "unknown reason \"" + reason + "\"");
    v.reason = *parsed;
    report.verdicts.push_back(std::move(v));
  }
  for (const PredictionVerdict& v : report.verdicts) {
    GroupAccuracy& g = report.groups[v.group];
    ++g.total;
    if (v.matched) {
      ++g.matched;
      ++report.matched;
    }
    ++report.reasons[v.reason];
  }
  report.accuracy = report.verdicts.empty()
                        ? 0.0
                        : static_cast<double>(report.matched) / static_cast<double>(report.verdicts.size());
  return report;
}

struct ComparisonRow {
  std::string group;
  std::size_t total = 0;
  double a = 0.0;
  double b = 0.0;
  double delta() const { return b - a; }
};

struct Comparison {
  std::string label_a = "A";
  std::string label_b = "B";
  std::vector<ComparisonRow> rows;  // one per type, then "All"
};

// Per-type accuracies side by side. Delta is B minus A. Both reports must
// cover the same ids.
inline Comparison compare_reports(const EvalReport& a, const EvalReport& b, std::string label_a = "A",
                                  std::string label_b = "B") {
  std::set<std::string> ids_a;
  std::set<std::string> ids_b;
  for (const auto& v : a.verdicts) ids_a.insert(v.id);
  for (const auto& v : b.verdicts) ids_b.insert(v.id);
  if (ids_a != ids_b) {
    std::vector<std::string> only;
    std::set_symmetric_difference(ids_a.begin(), ids_a.end(), ids_b.begin(), ids_b.end(), std::back_inserter(only));
    throw EvalError("reports cover different instances (" + std::to_string(only.size()) + " ids differ, first " +
                    only.front() + ")");
  }
  Comparison out{std::move(label_a), std::move(label_b), {}};
  std::set<std::string> names;
  for (const auto& [name, group] : a.groups) names.insert(name);
  for (const std::string& name : ordered_groups(names)) {
    const GroupAccuracy& ga = a.groups.at(name);
    const auto it = b.groups.find(name);
    const double accuracy_b = it == b.groups.end() ? 0.0 : it->second.accuracy();
    out.rows.push_back({name, ga.total, ga.accuracy(), accuracy_b});
  }
  out.rows.push_back({"All", a.verdicts.size(), a.accuracy, b.accuracy});
  return out;
}

inline std::string render_comparison(const Comparison& comparison) {
  auto signed_points = [](double delta) {
    std::ostringstream out;
    out << std::showpos << std::fixed << std::setprecision(1) << delta * 100.0;
    return out.str();
  };
  const int wa = static_cast<int>(std::max<std::size_t>(9, comparison.label_a.size() + 2));
  const int wb = static_cast<int>(std::max<std::size_t>(9, comparison.label_b.size() + 2));
  std::ostringstream out;
  out << std::left << std::setw(8) << "Type" << std::right << std::setw(6) << "N" << std::setw(wa)
      << comparison.label_a << std::setw(wb) << comparison.label_b << std::setw(9) << "Delta" << "\n";
  for (const ComparisonRow& row : comparison.rows) {
    out << std::left << std::setw(8) << row.group << std::right << std::setw(6) << row.total << std::setw(wa)
        << percent(row.a) << std::setw(wb) << percent(row.b) << std::setw(9) << signed_points(row.delta()) << "\n";
  }
  return out.str();
}

// Predictions JSONL: one {"id": ..., "output": ...} object per line.
inline std::vector<Prediction> parse_predictions_jsonl(std::string_view text) {
  std::vector<Prediction> out;
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
    const Json object = Json::parse(line, nullptr, false);
    if (object.is_discarded()) throw FormatError(where, "not valid JSON");
    out.push_back({detail::as_string(detail::field(object, "id", where), where + ".id"),
                   detail::as_string(detail::field(object, "output", where), where + ".output")});
  }
  return out;
}

inline std::string predictions_jsonl(const std::vector<Prediction>& predictions) {
  std::string out;
  for (const Prediction& p : predictions) out += Json({{"id", p.id}, {"output", p.output}}).dump() + "\n";
  return out;
}

// Ground truth JSON: {"id": [values]} or {"id": {"type": "LP", "objectives": [values]}}.
inline GroundTruth ground_truth_from_json(const Json& object, const std::string& path = "truth") {
  using namespace detail;
  if (!object.is_object()) throw FormatError(path, "expected an object mapping ids to objectives");
  GroundTruth out;
  for (auto it = object.begin(); it != object.end(); ++it) {
    const std::string p = child(path, it.key());
    TruthEntry entry;
    if (it->is_array()) {
      entry.objectives = number_vector(*it, p);
    } else {
      entry.objectives = number_vector(field(*it, "objectives", p), child(p, "objectives"));
      if (auto type = it->find("type"); type != it->end()) {
        const std::string name = as_string(*type, child(p, "type"));
        entry.type = parse_problem_type(name);
        if (!entry.type) throw FormatError(child(p, "type"), "unknown problem type \"" + name + "\"");
      }
    }
    if (entry.objectives.empty()) throw FormatError(p, "needs at least one acceptable objective");
    out.emplace(it.key(), std::move(entry));
  }
  return out;
}

inline Json ground_truth_to_json(const GroundTruth& truth) {
  Json out = Json::object();
  for (const auto& [id, entry] : truth) {
    Json values = Json::array();
    for (double v : entry.objectives) values.push_back(v);
    if (entry.type) {
      out[id] = {{"type", std::string(to_string(*entry.type))}, {"objectives", values}};
    } else {
      out[id] = values;
    }
  }
  return out;
}

// Ground truth carried by dataset records (one acceptable objective each).
inline GroundTruth truth_from_records(const std::vector<DialogueRecord>& records) {
  GroundTruth out;
  for (const DialogueRecord& record : records) {
    if (!out.emplace(record.meta.id, TruthEntry{record.meta.problem_type, {record.meta.ground_truth_objective}}).second) {
      throw EvalError("duplicate record id " + record.meta.id);
    }
  }
  return out;
}

// The dataset's own answers as predictions; scoring these must give 100%.
inline std::vector<Prediction> predictions_from_records(const std::vector<DialogueRecord>& records) {
  std::vector<Prediction> out;
  out.reserve(records.size());
  for (const DialogueRecord& record : records) out.push_back({record.meta.id, record.assistant});
  return out;
}

}  // namespace opsynth
