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

// Acceptance run. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "opsynth/eval/eval.hpp"
#include "opsynth/pipeline/build.hpp"
#include "support/call_generators.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace opsynth;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fixed(double value, int digits = 2) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << value;
  return out.str();
}

int failures = 0;

void report(bool pass, const std::string& name, const std::string& detail) {
  if (!pass) ++failures;
  std::cout << (pass ? "PASS  " : "FAIL  ") << name << ": " << detail << std::endl;
}

struct RunResult {
  int code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string command = std::string(OPSYNTH_CLI_PATH) + " " + args + " 2>&1";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return result;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.output.append(buffer, n);
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (char ch : text) n += ch == '\n' ? 1 : 0;
  return n;
}

// ---- solver oracle equivalence ---------------------------------------------

// Runs `count` cases; check(i) returns an empty string on agreement.
void oracle_suite(const std::string& name, int count, double limit_seconds,
                  const std::function<std::string(std::uint64_t)>& check) {
  const auto start = Clock::now();
  int mismatches = 0;
  std::string first;
  for (int i = 0; i < count; ++i) {
    const std::string problem = check(static_cast<std::uint64_t>(i));
    if (!problem.empty()) {
      if (mismatches++ == 0) first = "instance " + std::to_string(i) + ": " + problem;
    }
  }
  const double elapsed = seconds_since(start);
  std::string detail = std::to_string(count) + " instances, " + std::to_string(mismatches) + " mismatches, " +
                       fixed(elapsed) + " s (limit " + fixed(limit_seconds, 0) + " s)";
  if (!first.empty()) detail += "; first: " + first;
  report(mismatches == 0 && elapsed < limit_seconds, name, detail);
}

std::string compare_exact(const SolverResult& result, double expected) {
  if (!result.is_optimal()) return "status " + std::string(to_string(result.status));
  if (*result.objective != expected) return "got " + fixed(*result.objective, 6) + ", oracle " + fixed(expected, 6);
  return "";
}

std::string compare_close(const SolverResult& result, const oracle::Optimum& expected) {
  if (!expected.feasible) {
    return result.status == SolveStatus::Infeasible ? "" : "oracle infeasible, got " + std::string(to_string(result.status));
  }
  if (!result.is_optimal()) {
    return "status " + std::string(to_string(result.status)) + (result.message ? " (" + *result.message + ")" : "");
  }
  if (std::abs(*result.objective - expected.objective) > 1e-6) {
    return "got " + fixed(*result.objective, 9) + ", oracle " + fixed(expected.objective, 9);
  }
  return "";
}

void solver_criteria() {
  oracle_suite("solver/assignment vs permutation brute force", 500, 5.0, [](std::uint64_t i) {
    auto rng = derive_stream(101, i);
    const AssignmentInstance ap = testgen::random_assignment(rng, 7);
    return compare_exact(solve({ProblemType::AP, ap}),
                         oracle::assignment_brute_force(ap.cost, ap.direction == ObjectiveDirection::Maximize));
  });
  oracle_suite("solver/tsp vs tour brute force", 200, 30.0, [](std::uint64_t i) {
    auto rng = derive_stream(102, i);
    const TspInstance tsp = testgen::random_tsp(rng, 3, 9);
    return compare_exact(solve({ProblemType::TSP, tsp}), oracle::tsp_brute_force(tsp.dist));
  });
  oracle_suite("solver/max flow vs min-cut enumeration", 500, 10.0, [](std::uint64_t i) {
    auto rng = derive_stream(103, i);
    const MaxFlowInstance mf = testgen::random_max_flow(rng, 8);
    return compare_exact(solve({ProblemType::MF, mf}), oracle::min_cut_enumeration(mf));
  });
  oracle_suite("solver/milp vs integer box enumeration", 300, 60.0, [](std::uint64_t i) {
    auto rng = derive_stream(104, i);
    const bool pure = rng.bernoulli(0.5);
    const LpInstance lp = testgen::random_bounded_milp(rng, pure, 4, 6);
    // All-integer draws are pure integer programs whatever `pure` said.
    const bool all_integer = std::all_of(lp.integrality.begin(), lp.integrality.end(), [](bool f) { return f; });
    return compare_close(solve({all_integer ? ProblemType::IP : ProblemType::MILP, lp}),
                         oracle::milp_box_enumeration(lp));
  });
  oracle_suite("solver/lp vs vertex enumeration", 300, 10.0, [](std::uint64_t i) {
    auto rng = derive_stream(105, i);
    const LpInstance lp = testgen::random_bounded_lp(rng, 4, 6);
    return compare_close(solve({ProblemType::LP, lp}), oracle::lp_vertex_enumeration(lp));
  });
  oracle_suite("solver/min cost flow vs equivalent LP", 200, 30.0, [](std::uint64_t i) {
    auto rng = derive_stream(106, i);
    const MinCostFlowInstance mcf = testgen::random_min_cost_flow(rng, 8);
    const SolverResult lp = solve({ProblemType::LP, oracle::min_cost_flow_as_lp(mcf)});
    const SolverResult result = solve({ProblemType::MCF, mcf});
    if (lp.status == SolveStatus::Error) return "reference LP failed: " + lp.message.value_or("");
    if (lp.status == SolveStatus::Infeasible) {
      return result.status == SolveStatus::Infeasible ? std::string()
                                                      : "LP infeasible, got " + std::string(to_string(result.status));
    }
    if (!result.is_optimal()) return "status " + std::string(to_string(result.status));
    if (std::abs(*result.objective - *lp.objective) > 1e-6) {
      return "got " + fixed(*result.objective, 9) + ", LP " + fixed(*lp.objective, 9);
    }
    return std::string();
  });
}

// ---- dataset shape ------------------------------------------------------------

void dataset_shape_criterion(const fs::path& dir, const std::string& config) {
  const auto start = Clock::now();
  const std::string jobs = std::to_string(default_jobs());
  const fs::path train = dir / "train.jsonl";
  const fs::path test = dir / "test.jsonl";
  const RunResult gen_train = run_cli("generate --config " + config + " --preset train --seed 1 --mock --quiet --jobs " +
                                      jobs + " --out " + train.string());
  const RunResult gen_test =
      run_cli("generate --config " + config + " --preset test --seed 2 --mock --quiet --jobs " + jobs +
              " --reference-manifest " + (dir / "train.manifest.json").string() + " --out " + test.string());
  const RunResult audit_train = run_cli("audit " + train.string());
  const RunResult audit_test = run_cli("audit " + test.string());
  const double elapsed = seconds_since(start);
  const std::size_t n_train = line_count(slurp(train));
  const std::size_t n_test = line_count(slurp(test));
  const bool pass = gen_train.code == 0 && gen_test.code == 0 && n_train == 17508 && n_test == 175 &&
                    audit_train.code == 0 && audit_test.code == 0 && elapsed < 900.0;
  report(pass, "dataset shape (train 17,508 / test 175, audited)",
         "train " + std::to_string(n_train) + " records (generate exit " + std::to_string(gen_train.code) +
             ", audit exit " + std::to_string(audit_train.code) + "), test " + std::to_string(n_test) +
             " records (generate exit " + std::to_string(gen_test.code) + ", audit exit " +
             std::to_string(audit_test.code) + "), " + fixed(elapsed, 1) + " s (limit 900 s)");
}

// ---- filter calibration ---------------------------------------------------------

void filter_calibration_criterion() {
  constexpr std::size_t kAttempts = 2000;
  constexpr double kCorruption = 0.2;
  MockClient client({kCorruption, 0});
  const SamplerConfig sampler = default_sampler_config();
  const PromptTemplates templates;
  const std::string tool_doc = render_tool_doc(builtin_registry().for_type(ProblemType::LP));
  GenerationSettings settings;
  std::vector<FilterVerdict> verdicts(kAttempts);
  parallel_for(kAttempts, default_jobs(), [&](std::size_t a) {
    const std::uint64_t stream = attempt_stream_index(ProblemType::LP, a);
    RngStream rng = derive_stream(31, stream);
    const KeyInfo info = sample_key_info(ProblemType::LP, sampler, rng);
    const GenResponse statement = client.generate(
        detail::stage_request(info, GenStage::Problem, build_problem_prompt(info, templates), settings, stream));
    const GenResponse answer = client.generate(detail::stage_request(
        info, GenStage::Answer, build_answer_prompt(tool_doc, statement.text, templates), settings, stream));
    verdicts[a] = filter_pair(info, answer.text);
  });
  std::size_t kept = 0;
  std::map<FilterReason, std::size_t> drops;
  for (const FilterVerdict& v : verdicts) {
    if (v.kept) {
      ++kept;
    } else {
      ++drops[v.reason];
    }
  }
  bool reasons_ok = true;
  std::string reason_text;
  for (const auto& [reason, count] : drops) {
    reasons_ok = reasons_ok && (reason == FilterReason::ObjectiveMismatch || reason == FilterReason::CallExecutionError);
    reason_text += (reason_text.empty() ? "" : ", ") + std::string(to_string(reason)) + "=" + std::to_string(count);
  }
  const double retention = static_cast<double>(kept) / kAttempts;
  report(retention >= 0.75 && retention <= 0.85 && reasons_ok, "filter calibration (corruption 0.2, 2,000 LP attempts)",
         "retention " + fixed(retention, 4) + " (band [0.75, 0.85]); drops: " + reason_text);
}

// ---- parser robustness --------------------------------------------------------

void parser_criterion() {
  constexpr std::size_t kCount = 10000;
  double worst_batch = 0.0;
  std::size_t identical = 0;
  auto batch_start = Clock::now();
  for (std::size_t i = 0; i < kCount; ++i) {
    auto rng = derive_stream(41, i);
    const ToolCall call = testgen::random_schema_call(rng);
    try {
      if (parse_call(serialize_call(call)) == call) ++identical;
    } catch (const CallParseError&) {
    }
    if ((i + 1) % 1000 == 0) {
      worst_batch = std::max(worst_batch, seconds_since(batch_start));
      batch_start = Clock::now();
    }
  }
  report(identical == kCount && worst_batch <= 1.0, "parser round trip (10,000 schema-valid calls)",
         std::to_string(identical) + "/" + std::to_string(kCount) + " identical; slowest 1,000 took " +
             fixed(worst_batch, 3) + " s (budget 1 s)");

  std::size_t structured = 0;
  std::size_t other = 0;
  worst_batch = 0.0;
  batch_start = Clock::now();
  for (std::size_t i = 0; i < kCount; ++i) {
    auto rng = derive_stream(43, i);
    const std::string text = testgen::random_bytes(rng, 96);
    for (int mode = 0; mode < 2; ++mode) {
      try {
        if (mode == 0) {
          parse_call(text);
        } else {
          extract_call(text);
        }
      } catch (const CallParseError& e) {
        if (e.offset() <= text.size() || mode == 1) {
          ++structured;
        } else {
          ++other;
        }
      } catch (...) {
        ++other;
      }
    }
    if ((i + 1) % 1000 == 0) {
      worst_batch = std::max(worst_batch, seconds_since(batch_start));
      batch_start = Clock::now();
    }
  }
  report(other == 0 && worst_batch <= 1.0, "parser robustness (10,000 random byte strings)",
         std::to_string(structured) + " structured errors, " + std::to_string(other) +
             " unstructured failures; slowest 1,000 took " + fixed(worst_batch, 3) + " s (budget 1 s)");
}

// ---- evaluation soundness -------------------------------------------------------

void evaluation_criterion() {
  DatasetConfig config;
  MockClient client;
  double worst_self = 1.0;
  double worst_shuffled = 0.0;
  constexpr int kBatches = 5;
  for (int b = 0; b < kBatches; ++b) {
    BuildOptions options;
    options.seed = 500 + static_cast<std::uint64_t>(b);
    options.jobs = default_jobs();
    const DatasetPlan plan = {{ProblemType::LP, 29}, {ProblemType::IP, 29},  {ProblemType::MILP, 29},
                              {ProblemType::TSP, 29}, {ProblemType::MF, 28}, {ProblemType::AP, 28},
                              {ProblemType::MCF, 28}};
    const auto records = build_dataset(plan, config, client, options).records;
    const GroundTruth truth = truth_from_records(records);
    const auto predictions = predictions_from_records(records);
    worst_self = std::min(worst_self, score_predictions(predictions, truth, {}, default_jobs()).accuracy);

    // Type-preserving random permutation of the outputs.
    std::map<ProblemType, std::vector<std::size_t>> by_type;
    for (std::size_t i = 0; i < records.size(); ++i) by_type[records[i].meta.problem_type].push_back(i);
    auto rng = derive_stream(600, static_cast<std::uint64_t>(b));
    auto shuffled = predictions;
    for (auto& [type, indices] : by_type) {
      std::vector<std::size_t> order = indices;
      rng.shuffle(std::span<std::size_t>(order));
      for (std::size_t k = 0; k < indices.size(); ++k) shuffled[indices[k]].output = predictions[order[k]].output;
    }
    worst_shuffled = std::max(worst_shuffled, score_predictions(shuffled, truth, {}, default_jobs()).accuracy);
  }
  report(worst_self == 1.0, "evaluation: self-predictions score 100%",
         std::to_string(kBatches) + " batches of 200, lowest accuracy " + percent(worst_self));
  report(worst_shuffled <= 0.10, "evaluation: type-preserving shuffles score at most 10%",
         std::to_string(kBatches) + " batches of 200, highest accuracy " + percent(worst_shuffled));
}

// ---- determinism --------------------------------------------------------------

void determinism_criterion(const fs::path& dir, const std::string& config) {
  const std::string common = "generate --config " + config + " --preset test --seed 9 --mock --quiet";
  const RunResult first = run_cli(common + " --jobs 1 --out " + (dir / "det_a.jsonl").string());
  const RunResult second =
      run_cli(common + " --jobs " + std::to_string(default_jobs()) + " --out " + (dir / "det_b.jsonl").string());
  const std::string a = sha256_hex(slurp(dir / "det_a.jsonl"));
  const std::string b = sha256_hex(slurp(dir / "det_b.jsonl"));
  report(first.code == 0 && second.code == 0 && a == b && line_count(slurp(dir / "det_a.jsonl")) == 175,
         "determinism (two generate --mock --seed 9 runs)",
         "sha256 " + a.substr(0, 16) + "... vs " + b.substr(0, 16) + "...");
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / "opsynth_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string config = std::string(OPSYNTH_SOURCE_DIR) + "/configs/default.jsonc";

  solver_criteria();
  dataset_shape_criterion(dir, config);
  filter_calibration_criterion();
  parser_criterion();
  evaluation_criterion();
  determinism_criterion(dir, config);

  std::cout << "NOTE  out of reach: benchmark accuracies of fine-tuned and baseline models (for example 80.1% on "
               "MAMO-EasyLP, 68% and 40% zero-shot) need the trained models themselves and are not reproduced; the "
               "oracle suites above guarantee that any output with a correct call scores as correct."
            << std::endl;
  fs::remove_all(dir);
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
