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

// Drives the built binary end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "opsynth/eval/eval.hpp"

namespace opsynth {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run(const std::string& args, const std::string& env = "") {
  const std::string command = env + " " + std::string(OPSYNTH_CLI_PATH) + " " + args + " 2>&1";
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

void spit(const fs::path& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

std::string source(const std::string& relative) { return std::string(OPSYNTH_SOURCE_DIR) + "/" + relative; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("opsynth_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string generate(const std::string& name, const std::string& extra) {
    const RunResult r = run("generate --config " + source("configs/default.jsonc") + " --mock --quiet --out " +
                            path(name) + " " + extra);
    EXPECT_EQ(r.code, 0) << r.output;
    return path(name);
  }

  fs::path dir_;
};

TEST_F(CliTest, GenerateWritesDatasetAndManifest) {
  const std::string out = generate("tsp.jsonl", "--type TSP --count 50 --seed 9");
  const auto records = parse_dataset_jsonl(slurp(out));
  EXPECT_EQ(records.size(), 50u);
  const Json manifest = Json::parse(slurp(path("tsp.manifest.json")));
  EXPECT_EQ(manifest["seed"], 9);
  EXPECT_EQ(manifest["types"]["TSP"]["kept"], 50);
  EXPECT_EQ(manifest["jsonl_sha256"], sha256_hex(slurp(out)));
  EXPECT_EQ(run("audit " + out).code, 0);
}

TEST_F(CliTest, SameSeedSameBytes) {
  const std::string a = generate("a.jsonl", "--plan LP=6,AP=4 --seed 9");
  const std::string b = generate("b.jsonl", "--plan LP=6,AP=4 --seed 9 --jobs 3");
  EXPECT_EQ(sha256_hex(slurp(a)), sha256_hex(slurp(b)));
}

TEST_F(CliTest, ConfigAndUsageErrorsExitTwo) {
  RunResult r = run("generate --config " + path("missing.jsonc") + " --type LP --count 1 --mock --out " + path("x"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("missing.jsonc"), std::string::npos);

  spit(path("bad.jsonc"), "{\n  \"generation\": {\"temperature\": 5}\n}\n");
  r = run("generate --config " + path("bad.jsonc") + " --type LP --count 1 --mock --out " + path("x"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("generation.temperature"), std::string::npos) << r.output;

  r = run("generate --config " + source("configs/default.jsonc") + " --type XX --count 1 --out " + path("x"));
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST_F(CliTest, LiveWithoutKeyNamesTheVariable) {
  const RunResult r = run("generate --config " + source("configs/default.jsonc") +
                              " --type LP --count 1 --live --out " + path("x.jsonl"),
                          "env -u GEN_API_KEY");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("GEN_API_KEY"), std::string::npos) << r.output;
}

TEST_F(CliTest, SolveSampleFiles) {
  RunResult r = run("solve " + source("samples/lp_production.json"));
  ASSERT_EQ(r.code, 0) << r.output;
  const Json lp = Json::parse(r.output);
  EXPECT_EQ(lp["status"], "optimal");
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18: optimum at (2, 6).
  EXPECT_DOUBLE_EQ(lp["objective"].get<double>(), 36.0);

  r = run("solve " + source("samples/mcf_infeasible.json"));
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(Json::parse(r.output)["status"], "infeasible");

  EXPECT_EQ(run("solve " + source("samples/malformed.json")).code, 1);
  spit(path("junk.json"), "{not json");
  EXPECT_EQ(run("solve " + path("junk.json")).code, 1);
  EXPECT_EQ(run("solve " + path("absent.json")).code, 1);
}

TEST_F(CliTest, AuditFlagsCorruptedRecord) {
  const std::string out = generate("ap.jsonl", "--type AP --count 6 --seed 3");
  auto records = parse_dataset_jsonl(slurp(out));
  records[4].meta.ground_truth_objective += 1.0;
  spit(path("tampered.jsonl"), dataset_jsonl(records));
  const RunResult r = run("audit " + path("tampered.jsonl"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("record 4 "), std::string::npos) << r.output;
  EXPECT_EQ(r.output.find("record 3 "), std::string::npos);
}

TEST_F(CliTest, AuditEmptyFileWarns) {
  spit(path("empty.jsonl"), "");
  const RunResult r = run("audit " + path("empty.jsonl"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.output.find("warning"), std::string::npos);
  spit(path("broken.jsonl"), "{\"messages\": 3}\n");
  EXPECT_EQ(run("audit " + path("broken.jsonl")).code, 1);
}

TEST_F(CliTest, ExportEvaluateCompare) {
  const std::string out = generate("mix.jsonl", "--plan MF=5,MCF=5 --seed 4");
  ASSERT_EQ(run("export " + out + " --truth " + path("truth.json") + " --predictions " + path("self.jsonl")).code, 0);
  RunResult r = run("evaluate --predictions " + path("self.jsonl") + " --truth " + path("truth.json") +
                    " --report " + path("report.json"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("100.0%"), std::string::npos);
  const Json report = Json::parse(slurp(path("report.json")));
  EXPECT_EQ(report["matched"], 10);

  spit(path("empty.jsonl"), "");
  r = run("evaluate --predictions " + path("empty.jsonl") + " --truth " + path("truth.json"));
  EXPECT_EQ(r.code, 1);

  r = run("compare " + path("report.json") + " " + path("report.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.output.find("All"), std::string::npos);
}

TEST_F(CliTest, SampleAndSchemas) {
  const RunResult r = run("sample --type MCF --count 4 --seed 1 --out " + path("mcf.jsonl"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(fs::exists(path("mcf.manifest.json")));
  const Json schemas = Json::parse(run("schemas").output);
  EXPECT_EQ(schemas.size(), 7u);
  EXPECT_NE(run("schemas --doc").output.find("solve_min_cost_flow"), std::string::npos);
}

}  // namespace
}  // namespace opsynth
