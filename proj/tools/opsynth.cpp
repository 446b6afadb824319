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

// opsynth: dataset generation, solving, auditing and evaluation.
//
// Exit status: 0 success, 1 data failure, 2 usage or configuration failure.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "opsynth/eval/eval.hpp"
#include "opsynth/genclient/http.hpp"
#include "opsynth/pipeline/build.hpp"

namespace fs = std::filesystem;
using namespace opsynth;

namespace {

constexpr int kOk = 0;
constexpr int kDataFailure = 1;
constexpr int kUsageFailure = 2;

// Carries an exit status out of a subcommand.
struct Exit {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, std::string message) { throw Exit{code, std::move(message)}; }

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(kDataFailure, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(kDataFailure, "cannot write " + path.string());
  out << text;
  out.close();
  if (!out) fail(kDataFailure, "failed writing " + path.string());
}

Json parse_json_input(const std::string& path) {
  const Json value = Json::parse(read_input(path), nullptr, false);
  if (value.is_discarded()) fail(kDataFailure, path + ": not valid JSON");
  return value;
}

std::vector<DialogueRecord> read_dataset(const std::string& path) {
  try {
    return parse_dataset_jsonl(read_input(path));
  } catch (const FormatError& e) {
    fail(kDataFailure, path + ": " + e.what());
  }
}

fs::path manifest_path_for(const fs::path& jsonl) {
  fs::path out = jsonl;
  out.replace_extension(".manifest.json");
  return out;
}

ProblemType type_option(const std::string& name) {
  const auto type = parse_problem_type(name);
  if (!type) fail(kUsageFailure, "unknown problem type \"" + name + "\" (expected LP, IP, MILP, TSP, MF, AP or MCF)");
  return *type;
}

const std::map<std::string, DatasetPlan>& presets() {
  static const std::map<std::string, DatasetPlan> table = {
      {"train",
       {{ProblemType::LP, 3502},
        {ProblemType::IP, 3501},
        {ProblemType::MILP, 3493},
        {ProblemType::TSP, 3516},
        {ProblemType::MF, 3496}}},
      {"test", {{ProblemType::TSP, 50}, {ProblemType::MF, 50}, {ProblemType::AP, 50}, {ProblemType::MCF, 25}}},
  };
  return table;
}

// "LP=10,TSP=5"
DatasetPlan parse_plan(const std::string& text) {
  DatasetPlan plan;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) fail(kUsageFailure, "plan entry \"" + item + "\" is not TYPE=COUNT");
    const ProblemType type = type_option(item.substr(0, eq));
    std::size_t count = 0;
    try {
      std::size_t used = 0;
      count = std::stoul(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      fail(kUsageFailure, "plan entry \"" + item + "\" has a bad count");
    }
    if (count == 0) fail(kUsageFailure, "plan entry \"" + item + "\" must ask for at least one record");
    if (!plan.emplace(type, count).second) fail(kUsageFailure, "plan names " + item.substr(0, eq) + " twice");
  }
  if (plan.empty()) fail(kUsageFailure, "empty plan");
  return plan;
}

DatasetConfig load_config(const std::string& path) {
  if (!fs::exists(path)) fail(kUsageFailure, "configuration file not found: " + path);
  try {
    return load_dataset_config(path);
  } catch (const ConfigError& e) {
    fail(kUsageFailure, e.what());
  } catch (const std::exception& e) {
    fail(kUsageFailure, path + ": " + e.what());
  }
}

// generate ---------------------------------------------------------------

struct GenerateArgs {
  std::string config;
  std::string type;
  std::size_t count = 0;
  std::string plan;
  std::string preset;
  std::uint64_t seed = 0;
  bool mock = false;
  bool live = false;
  std::string out;
  std::size_t jobs = 1;
  std::optional<double> corruption;
  std::vector<std::string> reference_manifests;
  std::string split;
  bool quiet = false;
};

std::shared_ptr<GenerationClient> make_client(const DatasetConfig& config, bool quiet) {
  const GenerationSettings& g = config.generation;
  if (g.mode == "mock") return std::make_shared<MockClient>(g.mock);
  const auto key = api_key_from_env();
  if (!key) fail(kUsageFailure, std::string(kApiKeyEnv) + " is not set; live generation needs an API key");
  if (g.endpoint.empty()) fail(kUsageFailure, "generation.endpoint must be set for live generation");
  if (g.model_name.empty()) fail(kUsageFailure, "generation.model_name must be set for live generation");
  HttpClientConfig http{g.endpoint, g.model_name, *key, g.timeout_seconds};
  std::shared_ptr<GenerationClient> inner;
  try {
    inner = std::make_shared<HttpClient>(http);
  } catch (const std::exception& e) {
    fail(kUsageFailure, std::string("generation.endpoint: ") + e.what());
  }
  RetryingClient::Logger logger;
  if (!quiet) logger = [](const std::string& line) { std::cerr << line << "\n"; };
  return std::make_shared<RetryingClient>(inner, g.retry, RetryingClient::Sleeper{}, logger);
}

void print_summary(const BuildResult& result, const fs::path& out, const fs::path& manifest) {
  std::cout << std::left << std::setw(6) << "Type" << std::right << std::setw(8) << "Target" << std::setw(8) << "Kept"
            << std::setw(10) << "Attempts" << std::setw(9) << "Dropped" << std::setw(9) << "Overlap" << "\n";
  std::map<FilterReason, std::size_t> reasons;
  std::size_t attempted = 0;
  for (const auto& [type, tally] : result.tallies) {
    std::cout << std::left << std::setw(6) << to_string(type) << std::right << std::setw(8) << tally.target
              << std::setw(8) << tally.kept << std::setw(10) << tally.attempted << std::setw(9) << tally.dropped()
              << std::setw(9) << tally.overlap_skipped << "\n";
    for (const auto& [reason, count] : tally.drops) reasons[reason] += count;
    attempted += tally.attempted;
  }
  const double retention =
      attempted == 0 ? 0.0 : static_cast<double>(result.records.size()) / static_cast<double>(attempted);
  std::cout << "records: " << result.records.size() << " (retention " << percent(retention) << ")\n";
  for (const auto& [reason, count] : reasons) {
    if (count > 0) std::cout << "  dropped " << to_string(reason) << ": " << count << "\n";
  }
  std::cout << "wrote " << out.string() << "\n"
            << "wrote " << manifest.string() << "\n";
}

int cmd_generate(const GenerateArgs& args) {
  if (args.mock && args.live) fail(kUsageFailure, "--mock and --live are mutually exclusive");
  const int plan_sources = (!args.type.empty() ? 1 : 0) + (!args.plan.empty() ? 1 : 0) + (!args.preset.empty() ? 1 : 0);
  if (plan_sources != 1) fail(kUsageFailure, "give exactly one of --type/--count, --plan or --preset");
  DatasetPlan plan;
  if (!args.type.empty()) {
    if (args.count == 0) fail(kUsageFailure, "--type needs --count of at least 1");
    plan[type_option(args.type)] = args.count;
  } else if (!args.plan.empty()) {
    plan = parse_plan(args.plan);
  } else {
    plan = presets().at(args.preset);
  }

  DatasetConfig config = load_config(args.config);
  if (args.mock) config.generation.mode = "mock";
  if (args.live) config.generation.mode = "live";
  if (args.corruption) {
    if (!(*args.corruption >= 0.0 && *args.corruption <= 1.0)) fail(kUsageFailure, "--corruption must lie in [0, 1]");
    config.generation.mock.corruption = *args.corruption;
  }
  const std::shared_ptr<GenerationClient> client = make_client(config, args.quiet);

  BuildOptions options;
  options.seed = args.seed;
  options.jobs = std::max<std::size_t>(1, args.jobs);
  options.split = args.split.empty() ? args.preset : args.split;
  for (const std::string& path : args.reference_manifests) {
    try {
      const auto hashes = manifest_instance_hashes(parse_json_input(path), path);
      options.excluded_hashes.insert(hashes.begin(), hashes.end());
    } catch (const FormatError& e) {
      fail(kDataFailure, e.what());
    }
  }
  if (!args.quiet) options.progress = [](const std::string& line) { std::cerr << line << "\n"; };

  BuildResult result;
  try {
    result = build_dataset(plan, config, *client, options);
  } catch (const std::exception& e) {
    fail(kDataFailure, std::string("generation failed: ") + e.what());
  }
  const std::string jsonl = dataset_jsonl(result.records);
  const fs::path out(args.out);
  const fs::path manifest = manifest_path_for(out);
  write_output(out, jsonl);
  write_output(manifest, dataset_manifest(result, config, options, jsonl).dump(2) + "\n");
  print_summary(result, out, manifest);
  if (result.aborted) fail(kDataFailure, "aborted: " + result.abort_reason);
  return kOk;
}

// solve ------------------------------------------------------------------

int cmd_solve(const std::string& path) {
  const Json object = parse_json_input(path);
  ProblemInstance instance;
  try {
    instance = instance_from_json(object);
  } catch (const FormatError& e) {
    fail(kDataFailure, path + ": " + e.what());
  }
  const SolverResult result = solve(instance);
  std::cout << result_to_json(result).dump(2) << "\n";
  if (result.status == SolveStatus::Error) {
    fail(kDataFailure, result.message ? *result.message : std::string("solver error"));
  }
  return kOk;
}

// audit ------------------------------------------------------------------

int cmd_audit(const std::string& path) {
  const auto records = read_dataset(path);
  if (records.empty()) {
    std::cerr << "warning: " << path << " holds no records; nothing to audit\n";
    return kOk;
  }
  const auto issues = audit_records(records);
  for (const AuditIssue& issue : issues) {
    std::cout << "record " << issue.index << " (" << issue.id << "): " << issue.problem << "\n";
  }
  std::cout << "audited " << records.size() << " records, " << issues.size() << " failed\n";
  return issues.empty() ? kOk : kDataFailure;
}

// evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string predictions;
  std::string truth;
  std::string report;
  std::size_t jobs = 1;
  std::string counting = "whitespace";
  double chars_per_token = 4.0;
};

int cmd_evaluate(const EvaluateArgs& args) {
  TokenCounting counting;
  if (args.counting == "chars") {
    counting = {TokenCounting::Mode::CharsPerToken, args.chars_per_token};
  } else if (args.counting != "whitespace") {
    fail(kUsageFailure, "--token-counting must be whitespace or chars");
  }
  std::vector<Prediction> predictions;
  GroundTruth truth;
  try {
    predictions = parse_predictions_jsonl(read_input(args.predictions));
  } catch (const FormatError& e) {
    fail(kDataFailure, args.predictions + ": " + e.what());
  }
  try {
    truth = ground_truth_from_json(parse_json_input(args.truth));
  } catch (const FormatError& e) {
    fail(kDataFailure, args.truth + ": " + e.what());
  }
  EvalReport report;
  try {
    report = score_predictions(predictions, truth, {}, std::max<std::size_t>(1, args.jobs), counting);
  } catch (const EvalError& e) {
    fail(kDataFailure, e.what());
  }
  std::cout << render_report_table(report);
  if (report.tokens) {
    std::cout << "output tokens: mean " << std::fixed << std::setprecision(1) << report.tokens->mean << ", median "
              << report.tokens->median << ", p95 " << report.tokens->p95 << "\n";
  }
  if (!args.report.empty()) {
    Json json = report_to_json(report);
    if (json.contains("token_stats")) json["token_stats"]["counting"] = args.counting;
    write_output(args.report, json.dump(2) + "\n");
    std::cout << "wrote " << args.report << "\n";
  }
  return kOk;
}

// export -----------------------------------------------------------------

int cmd_export(const std::string& dataset, const std::string& truth_out, const std::string& predictions_out) {
  const auto records = read_dataset(dataset);
  GroundTruth truth;
  try {
    truth = truth_from_records(records);
  } catch (const EvalError& e) {
    fail(kDataFailure, dataset + ": " + e.what());
  }
  write_output(truth_out, ground_truth_to_json(truth).dump(2) + "\n");
  std::cout << "wrote " << truth_out << " (" << truth.size() << " ids)\n";
  if (!predictions_out.empty()) {
    write_output(predictions_out, predictions_jsonl(predictions_from_records(records)));
    std::cout << "wrote " << predictions_out << "\n";
  }
  return kOk;
}

// sample -----------------------------------------------------------------

int cmd_sample(const std::string& type_name, std::size_t count, std::uint64_t seed, const std::string& config_path,
               const std::string& out, std::size_t jobs) {
  const ProblemType type = type_option(type_name);
  if (count == 0) fail(kUsageFailure, "--count must be at least 1");
  const SamplerConfig sampler = config_path.empty() ? default_sampler_config() : load_config(config_path).sampler;
  std::vector<KeyInfo> batch;
  try {
    batch = sample_batch(type, count, sampler, seed, std::max<std::size_t>(1, jobs));
  } catch (const SamplingError& e) {
    fail(kDataFailure, e.what());
  }
  const std::string jsonl = key_info_jsonl(batch);
  const fs::path path(out);
  write_output(path, jsonl);
  write_output(manifest_path_for(path), sample_manifest(type, seed, sampler, batch, jsonl).dump(2) + "\n");
  std::cout << "wrote " << batch.size() << " instances to " << path.string() << "\n";
  return kOk;
}

// schemas ----------------------------------------------------------------

int cmd_schemas(bool doc) {
  const ToolRegistry& registry = builtin_registry();
  if (doc) {
    for (const ToolSchema& schema : registry.schemas()) std::cout << render_tool_doc(schema) << "\n";
  } else {
    std::cout << registry.to_json().dump(2) << "\n";
  }
  return kOk;
}

// compare ----------------------------------------------------------------

int cmd_compare(const std::string& a, const std::string& b, const std::string& label_a, const std::string& label_b) {
  try {
    const EvalReport first = report_from_json(parse_json_input(a), a);
    const EvalReport second = report_from_json(parse_json_input(b), b);
    std::cout << render_comparison(compare_reports(first, second, label_a, label_b));
  } catch (const FormatError& e) {
    fail(kDataFailure, e.what());
  } catch (const EvalError& e) {
    fail(kDataFailure, e.what());
  }
  return kOk;
}

// stats ------------------------------------------------------------------

int cmd_stats(const std::string& dataset) {
  const auto records = read_dataset(dataset);
  if (records.empty()) fail(kDataFailure, dataset + " holds no records");
  std::map<ProblemType, std::vector<std::string>> answers;
  std::vector<std::string> all_answers;
  std::vector<std::string> statements;
  for (const DialogueRecord& record : records) {
    answers[record.meta.problem_type].push_back(record.assistant);
    all_answers.push_back(record.assistant);
    statements.push_back(record.user);
  }
  auto line = [](const std::string& label, std::size_t n, const TokenStats& s) {
    std::cout << std::left << std::setw(12) << label << std::right << std::setw(8) << n << std::fixed
              << std::setprecision(1) << std::setw(9) << s.mean << std::setw(9) << s.median << std::setw(9) << s.p95
              << "\n";
  };
  std::cout << "Whitespace tokens per assistant message\n";
  std::cout << std::left << std::setw(12) << "Type" << std::right << std::setw(8) << "N" << std::setw(9) << "Mean"
            << std::setw(9) << "Median" << std::setw(9) << "P95" << "\n";
  for (const auto& [type, texts] : answers) line(std::string(to_string(type)), texts.size(), token_stats(texts));
  line("All", all_answers.size(), token_stats(all_answers));
  line("Statements", statements.size(), token_stats(statements));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic tool-calling datasets for optimization problems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "opsynth 0.1.0");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Build a filtered dialogue dataset");
  generate->add_option("--config", gen.config, "Configuration file (JSON with comments)")->required();
  generate->add_option("--type", gen.type, "Single problem type (use with --count)");
  generate->add_option("--count", gen.count, "Records to keep for --type");
  generate->add_option("--plan", gen.plan, "Per-type quotas, e.g. LP=10,TSP=5");
  generate->add_option("--preset", gen.preset, "Named plan")->check(CLI::IsMember({"train", "test"}));
  generate->add_option("--seed", gen.seed, "Master seed");
  generate->add_flag("--mock", gen.mock, "Use the offline mock generator");
  generate->add_flag("--live", gen.live, "Use the HTTP generator (needs GEN_API_KEY)");
  generate->add_option("--out", gen.out, "Output JSONL; the manifest is written beside it")->required();
  generate->add_option("--jobs", gen.jobs, "Worker threads");
  generate->add_option("--corruption", gen.corruption, "Override generation.mock.corruption");
  generate->add_option("--reference-manifest", gen.reference_manifests,
                       "Manifest whose instances must not reappear (repeatable)");
  generate->add_option("--split", gen.split, "Split label recorded in the manifest");
  generate->add_flag("--quiet", gen.quiet, "No progress output");

  std::string solve_path;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance file and print the result");
  solve_cmd->add_option("instance", solve_path, "Instance JSON file")->required();

  std::string audit_path;
  auto* audit = app.add_subcommand("audit", "Re-run every assistant call in a dataset");
  audit->add_option("dataset", audit_path, "Dataset JSONL")->required();

  EvaluateArgs eval;
  auto* evaluate = app.add_subcommand("evaluate", "Score model outputs by executing their calls");
  evaluate->add_option("--predictions", eval.predictions, "Predictions JSONL")->required();
  evaluate->add_option("--truth", eval.truth, "Ground truth JSON")->required();
  evaluate->add_option("--report", eval.report, "Write the report JSON here");
  evaluate->add_option("--jobs", eval.jobs, "Worker threads");
  evaluate->add_option("--token-counting", eval.counting, "whitespace or chars");
  evaluate->add_option("--chars-per-token", eval.chars_per_token, "Divisor for --token-counting chars");

  std::string export_dataset;
  std::string export_truth;
  std::string export_predictions;
  auto* export_cmd = app.add_subcommand("export", "Write ground truth (and self-predictions) for a dataset");
  export_cmd->add_option("dataset", export_dataset, "Dataset JSONL")->required();
  export_cmd->add_option("--truth", export_truth, "Ground truth JSON output")->required();
  export_cmd->add_option("--predictions", export_predictions, "Self-predictions JSONL output");

  std::string sample_type;
  std::size_t sample_count = 0;
  std::uint64_t sample_seed = 0;
  std::string sample_config;
  std::string sample_out;
  std::size_t sample_jobs = 1;
  auto* sample = app.add_subcommand("sample", "Draw key information records without generation");
  sample->add_option("--type", sample_type, "Problem type")->required();
  sample->add_option("--count", sample_count, "Number of instances")->required();
  sample->add_option("--seed", sample_seed, "Master seed");
  sample->add_option("--config", sample_config, "Configuration file for sampler ranges");
  sample->add_option("--out", sample_out, "Output JSONL")->required();
  sample->add_option("--jobs", sample_jobs, "Worker threads");

  bool schema_doc = false;
  auto* schemas = app.add_subcommand("schemas", "Print the tool schemas");
  schemas->add_flag("--doc", schema_doc, "Print the prompt documentation instead of JSON");

  std::string compare_a;
  std::string compare_b;
  std::string label_a = "A";
  std::string label_b = "B";
  auto* compare = app.add_subcommand("compare", "Per-type accuracy of two reports side by side");
  compare->add_option("first", compare_a, "Report JSON")->required();
  compare->add_option("second", compare_b, "Report JSON")->required();
  compare->add_option("--label-a", label_a, "Column label for the first report");
  compare->add_option("--label-b", label_b, "Column label for the second report");

  std::string stats_dataset;
  auto* stats = app.add_subcommand("stats", "Token statistics of a dataset");
  stats->add_option("dataset", stats_dataset, "Dataset JSONL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageFailure;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*solve_cmd) return cmd_solve(solve_path);
    if (*audit) return cmd_audit(audit_path);
    if (*evaluate) return cmd_evaluate(eval);
    if (*export_cmd) return cmd_export(export_dataset, export_truth, export_predictions);
    if (*sample) return cmd_sample(sample_type, sample_count, sample_seed, sample_config, sample_out, sample_jobs);
    if (*schemas) return cmd_schemas(schema_doc);
    if (*compare) return cmd_compare(compare_a, compare_b, label_a, label_b);
    if (*stats) return cmd_stats(stats_dataset);
  } catch (const Exit& e) {
    if (!e.message.empty()) std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataFailure;
  }
  return kUsageFailure;
}
