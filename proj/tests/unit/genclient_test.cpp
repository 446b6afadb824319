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

#include <gtest/gtest.h>

#include <algorithm>
#include <mutex>
#include <iterator>
#include <regex>
#include <sstream>

#include "opsynth/genclient/http.hpp"
#include "opsynth/genclient/mock.hpp"
#include "opsynth/renderer/prompts.hpp"
#include "opsynth/sampler/sampler.hpp"
#include "opsynth/toolcall/parser.hpp"

namespace opsynth {
namespace {

std::vector<double> numbers_in(const std::string& text) {
  static const std::regex number(R"(-?\d+(?:\.\d+)?)");
  std::vector<double> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), number); it != std::sregex_iterator(); ++it) {
    out.push_back(std::stod(it->str()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

GenRequest problem_request(const KeyInfo& info) {
  GenRequest request;
  request.prompt = build_problem_prompt(info);
  request.grounding = std::make_shared<Grounding>(Grounding{info, GenStage::Problem});
  return request;
}

GenRequest answer_request(const KeyInfo& info, const std::string& statement) {
  GenRequest request;
  request.prompt =
      build_answer_prompt(render_tool_doc(builtin_registry().for_type(info.type())), statement);
  request.grounding = std::make_shared<Grounding>(Grounding{info, GenStage::Answer});
  return request;
}

GenRequest bare(std::string prompt) {
  GenRequest request;
  request.prompt = std::move(prompt);
  return request;
}

TEST(MockClientTest, StatementIsDeterministicAndLossless) {
  MockClient client;
  for (ProblemType type : kAllProblemTypes) {
    for (const KeyInfo& info : sample_batch(type, 10, default_sampler_config(), 4)) {
      const GenResponse first = client.generate(problem_request(info));
      ASSERT_TRUE(first.ok()) << first.error_message;
      EXPECT_EQ(first.finish_reason, FinishReason::Complete);
      EXPECT_EQ(client.generate(problem_request(info)).text, first.text);
      auto expected = parameter_values(info.instance);
      std::sort(expected.begin(), expected.end());
      EXPECT_EQ(numbers_in(first.text), expected) << first.text;
      EXPECT_NE(first.text.find(info.context), std::string::npos);
    }
  }
}

TEST(MockClientTest, StatementWithoutGroundingReadsThePrompt) {
  const KeyInfo info = sample_batch(ProblemType::LP, 1, default_sampler_config(), 8)[0];
  GenRequest request = problem_request(info);
  const std::string grounded = MockClient().generate(request).text;
  request.grounding.reset();
  EXPECT_EQ(MockClient().generate(request).text, grounded);
}

TEST(MockClientTest, AnswerEndsWithGroundTruthCall) {
  MockClient client;
  for (ProblemType type : kAllProblemTypes) {
    for (const KeyInfo& info : sample_batch(type, 10, default_sampler_config(), 5)) {
      const GenResponse response = client.generate(answer_request(info, "Some statement."));
      ASSERT_TRUE(response.ok()) << response.error_message;
      const std::string call = serialize_call(ground_truth_call(info));
      EXPECT_TRUE(response.text.ends_with("\n" + call)) << response.text;
      EXPECT_EQ(extract_call(response.text), ground_truth_call(info));
    }
  }
}

TEST(MockClientTest, AnswerNeedsGrounding) {
  const KeyInfo info = sample_batch(ProblemType::AP, 1, default_sampler_config(), 1)[0];
  GenRequest request = answer_request(info, "Assign the nurses.");
  request.grounding.reset();
  const GenResponse response = MockClient().generate(request);
  EXPECT_FALSE(response.ok());
  EXPECT_TRUE(response.text.empty());
  EXPECT_EQ(response.error_kind, GenErrorKind::InvalidRequest);
}

TEST(MockClientTest, FullCorruptionBreaksTheObjective) {
  MockClient client({1.0, 0});
  int mismatched = 0;
  int total = 0;
  for (ProblemType type : kAllProblemTypes) {
    for (const KeyInfo& info : sample_batch(type, 20, default_sampler_config(), 6)) {
      const GenResponse response = client.generate(answer_request(info, "Statement " + info.context + std::to_string(total)));
      const SolverResult result = dispatch(extract_call(response.text));
      ++total;
      if (!result.is_optimal() || !objectives_match(*info.ground_truth.objective, *result.objective)) ++mismatched;
    }
  }
  EXPECT_GE(mismatched, total * 95 / 100);
}

TEST(MockClientTest, CorruptionRateFollowsProbability) {
  MockClient client({0.2, 0});
  int corrupted = 0;
  const auto batch = sample_batch(ProblemType::LP, 1000, default_sampler_config(), 12);
  MockClient writer;
  for (const KeyInfo& info : batch) {
    const std::string statement = writer.generate(problem_request(info)).text;
    const GenResponse response = client.generate(answer_request(info, statement));
    if (extract_call(response.text) != ground_truth_call(info)) ++corrupted;
  }
  EXPECT_NEAR(corrupted / 1000.0, 0.2, 0.04);
}

TEST(MockClientTest, AnswerLengthIsModerate) {
  MockClient client;
  for (ProblemType type : kAllProblemTypes) {
    for (const KeyInfo& info : sample_batch(type, 20, default_sampler_config(), 14)) {
      const std::string text = client.generate(answer_request(info, "Statement.")).text;
      std::istringstream words(text);
      const auto count = std::distance(std::istream_iterator<std::string>(words), {});
      EXPECT_GE(count, 80) << to_string(type);
      EXPECT_LE(count, 1200) << to_string(type);
    }
  }
}

TEST(MockClientTest, OutputBudgetTruncates) {
  const KeyInfo info = sample_batch(ProblemType::TSP, 1, default_sampler_config(), 2)[0];
  GenRequest request = problem_request(info);
  request.max_output_tokens = 10;
  const GenResponse response = MockClient().generate(request);
  EXPECT_EQ(response.finish_reason, FinishReason::Length);
  EXPECT_EQ(response.text.size(), 40u);
  EXPECT_EQ(response.usage.output_tokens, 10);
}

TEST(MockClientTest, MalformedRequestsAreRejected) {
  MockClient client;
  GenRequest request;
  EXPECT_EQ(client.generate(request).error_message, "prompt is empty");
  request.prompt = "x";
  request.max_output_tokens = 0;
  EXPECT_EQ(client.generate(request).error_kind, GenErrorKind::InvalidRequest);
  request.max_output_tokens = 5;
  request.temperature = 2.5;
  EXPECT_EQ(client.generate(request).error_message, "temperature must lie in [0, 2]");
}

// Fails with the scripted kinds in order, then succeeds.
class ScriptedClient : public GenerationClient {
 public:
  explicit ScriptedClient(std::vector<GenErrorKind> failures) : failures_(std::move(failures)) {}

  GenResponse generate(const GenRequest& request) override {
    std::lock_guard lock(mutex_);
    ++calls;
    if (next_ < failures_.size()) {
      return GenResponse::failure(failures_[next_++], "scripted failure");
    }
    GenResponse out;
    out.text = "echo " + request.prompt;
    out.finish_reason = FinishReason::Complete;
    return out;
  }

  int calls = 0;

 private:
  std::mutex mutex_;
  std::vector<GenErrorKind> failures_;
  std::size_t next_ = 0;
};

struct RetryHarness {
  std::vector<long long> sleeps;
  std::vector<std::string> log;

  RetryingClient wrap(std::shared_ptr<GenerationClient> inner, RetryPolicy policy = {}) {
    return RetryingClient(
        std::move(inner), policy, [this](std::chrono::milliseconds d) { sleeps.push_back(d.count()); },
        [this](const std::string& line) { log.push_back(line); });
  }
};

TEST(RetryingClientTest, TwoTransientFailuresThenSuccess) {
  auto inner = std::make_shared<ScriptedClient>(std::vector{GenErrorKind::Network, GenErrorKind::Server});
  RetryHarness harness;
  auto client = harness.wrap(inner);
  GenRequest request;
  request.prompt = "hi";
  request.request_tag = "LP-3";
  const GenResponse response = client.generate(request);
  EXPECT_TRUE(response.ok());
  EXPECT_EQ(response.attempts, 3);
  EXPECT_EQ(inner->calls, 3);
  EXPECT_EQ(harness.sleeps, (std::vector<long long>{500, 1000}));
  ASSERT_EQ(harness.log.size(), 3u);
  EXPECT_EQ(harness.log.back(), "request LP-3: succeeded on attempt 3");
}

TEST(RetryingClientTest, AuthErrorsAreNeverRetried) {
  auto inner = std::make_shared<ScriptedClient>(std::vector{GenErrorKind::Auth});
  RetryHarness harness;
  auto client = harness.wrap(inner);
  const GenResponse response = client.generate(bare("hi"));
  EXPECT_FALSE(response.ok());
  EXPECT_EQ(response.error_kind, GenErrorKind::Auth);
  EXPECT_EQ(response.attempts, 1);
  EXPECT_TRUE(harness.sleeps.empty());
}

TEST(RetryingClientTest, GivesUpAfterConfiguredRetries) {
  auto inner = std::make_shared<ScriptedClient>(std::vector<GenErrorKind>(10, GenErrorKind::RateLimit));
  RetryHarness harness;
  auto client = harness.wrap(inner, {2, 100, 3, 250});
  const GenResponse response = client.generate(bare("hi"));
  EXPECT_EQ(response.error_kind, GenErrorKind::RateLimit);
  EXPECT_EQ(response.attempts, 3);
  EXPECT_EQ(harness.sleeps, (std::vector<long long>{100, 250}));
  EXPECT_NE(harness.log.back().find("giving up"), std::string::npos);
}

// Records the peak number of concurrent calls; request "fail" throws.
class ConcurrencyProbe : public GenerationClient {
 public:
  GenResponse generate(const GenRequest& request) override {
    const int now = ++active;
    int seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    --active;
    if (request.prompt == "fail") throw std::runtime_error("boom");
    GenResponse out;
    out.text = request.prompt;
    out.finish_reason = FinishReason::Complete;
    return out;
  }
  std::atomic<int> active{0};
  std::atomic<int> peak{0};
};

TEST(GenerateBatchTest, OrderAndInFlightLimit) {
  ConcurrencyProbe probe;
  std::vector<GenRequest> requests;
  for (int i = 0; i < 10; ++i) requests.push_back(bare("p" + std::to_string(i)));
  const auto responses = generate_batch(probe, requests, 3);
  ASSERT_EQ(responses.size(), 10u);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(responses[i].text, "p" + std::to_string(i));
  EXPECT_LE(probe.peak.load(), 3);
  EXPECT_GE(probe.peak.load(), 1);
}

TEST(GenerateBatchTest, FailuresAreIsolated) {
  ConcurrencyProbe probe;
  std::vector<GenRequest> requests;
  for (int i = 0; i < 10; ++i) requests.push_back(bare(i == 4 ? "fail" : "ok"));
  const auto responses = generate_batch(probe, requests, 4);
  EXPECT_EQ(std::count_if(responses.begin(), responses.end(), [](const auto& r) { return r.ok(); }), 9);
  EXPECT_FALSE(responses[4].ok());
  EXPECT_EQ(responses[4].error_message, "boom");
}

TEST(GenerateBatchTest, EmptyList) {
  ConcurrencyProbe probe;
  EXPECT_TRUE(generate_batch(probe, {}, 2).empty());
}

class LocalServer {
 public:
  explicit LocalServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
    server_.Post("/v1/chat/completions", std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions"; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(HttpClientTest, SendsChatCompletionAndReadsReply) {
  Json seen;
  std::string auth;
  LocalServer server([&](const httplib::Request& req, httplib::Response& res) {
    seen = Json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.set_content(
        R"({"choices":[{"message":{"role":"assistant","content":"solved"},"finish_reason":"stop"}],)"
        R"("usage":{"prompt_tokens":11,"completion_tokens":2}})",
        "application/json");
  });
  HttpClient client({server.endpoint(), "test-model", "secret", 5});
  GenRequest request = bare("Solve this.");
  request.temperature = 0.3;
  request.max_output_tokens = 64;
  const GenResponse response = client.generate(request);
  ASSERT_TRUE(response.ok()) << response.error_message;
  EXPECT_EQ(response.text, "solved");
  EXPECT_EQ(response.usage.prompt_tokens, 11);
  EXPECT_EQ(response.usage.output_tokens, 2);
  EXPECT_EQ(auth, "Bearer secret");
  EXPECT_EQ(seen["model"], "test-model");
  EXPECT_EQ(seen["messages"][0]["content"], "Solve this.");
  EXPECT_EQ(seen["max_tokens"], 64);
  EXPECT_DOUBLE_EQ(seen["temperature"].get<double>(), 0.3);
}

TEST(HttpClientTest, MapsProviderFailures) {
  int status = 401;
  std::string body = R"({"error":{"message":"bad key"}})";
  LocalServer server([&](const httplib::Request&, httplib::Response& res) {
    res.status = status;
    res.set_content(body, "application/json");
  });
  HttpClient client({server.endpoint(), "m", "k", 5});
  GenResponse response = client.generate(bare("p"));
  EXPECT_EQ(response.error_kind, GenErrorKind::Auth);
  EXPECT_EQ(response.error_message, "HTTP 401: bad key");
  status = 429;
  EXPECT_EQ(client.generate(bare("p")).error_kind, GenErrorKind::RateLimit);
  status = 503;
  EXPECT_EQ(client.generate(bare("p")).error_kind, GenErrorKind::Server);
  status = 400;
  EXPECT_EQ(client.generate(bare("p")).error_kind, GenErrorKind::InvalidRequest);
  status = 200;
  body = "not json";
  EXPECT_EQ(client.generate(bare("p")).error_message, "malformed completion response");
  body = R"({"choices":[{"message":{"content":"cut"},"finish_reason":"length"}]})";
  EXPECT_EQ(client.generate(bare("p")).finish_reason, FinishReason::Length);
}

TEST(HttpClientTest, RetriesTransientServerErrors) {
  std::atomic<int> hits{0};
  LocalServer server([&](const httplib::Request&, httplib::Response& res) {
    if (++hits <= 2) {
      res.status = 502;
      return;
    }
    res.set_content(R"({"choices":[{"message":{"content":"ok"}}]})", "application/json");
  });
  RetryingClient client(std::make_shared<HttpClient>(HttpClientConfig{server.endpoint(), "m", "", 5}), {},
                        [](std::chrono::milliseconds) {});
  const GenResponse response = client.generate(bare("p"));
  EXPECT_TRUE(response.ok());
  EXPECT_EQ(response.attempts, 3);
  EXPECT_EQ(hits.load(), 3);
}

TEST(HttpClientTest, UnreachableEndpointIsNetworkError) {
  HttpClient client({"http://127.0.0.1:1/v1/chat/completions", "m", "", 2});
  EXPECT_EQ(client.generate(bare("p")).error_kind, GenErrorKind::Network);
}

TEST(HttpClientTest, EndpointParsing) {
  const ParsedUrl url = parse_endpoint("https://api.example.com:8443/v1/chat/completions");
  EXPECT_EQ(url.origin, "https://api.example.com:8443");
  EXPECT_EQ(url.path, "/v1/chat/completions");
  EXPECT_THROW(parse_endpoint("ftp://x/y"), std::invalid_argument);
  EXPECT_THROW(parse_endpoint("example.com"), std::invalid_argument);
}

}  // namespace
}  // namespace opsynth
