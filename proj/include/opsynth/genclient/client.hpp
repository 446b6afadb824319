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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "opsynth/core/types.hpp"

namespace opsynth {

// Which generation stage a request belongs to.
enum class GenStage { Problem, Answer };

// Optional side channel for offline clients: the key information a prompt was
// built from. Live clients ignore it.
struct Grounding {
  KeyInfo info;
  GenStage stage = GenStage::Problem;
};

struct GenRequest {
  std::string prompt;
  double temperature = 0.7;
  int max_output_tokens = 2048;
  std::string request_tag;
  std::shared_ptr<const Grounding> grounding;
};

enum class FinishReason { Complete, Length, Error };

inline constexpr std::string_view to_string(FinishReason reason) {
  switch (reason) {
    case FinishReason::Complete: return "complete";
    case FinishReason::Length: return "length";
    case FinishReason::Error: return "error";
  }
  return "?";
}

// Network, RateLimit and Server are transient and retried; the rest are not.
enum class GenErrorKind { None, Network, RateLimit, Server, Auth, InvalidRequest };

inline constexpr std::string_view to_string(GenErrorKind kind) {
  switch (kind) {
    case GenErrorKind::None: return "none";
    case GenErrorKind::Network: return "network";
    case GenErrorKind::RateLimit: return "rate_limit";
    case GenErrorKind::Server: return "server";
    case GenErrorKind::Auth: return "auth";
    case GenErrorKind::InvalidRequest: return "invalid_request";
  }
  return "?";
}

inline bool is_transient(GenErrorKind kind) {
  return kind == GenErrorKind::Network || kind == GenErrorKind::RateLimit || kind == GenErrorKind::Server;
}

struct TokenUsage {
  int prompt_tokens = 0;
  int output_tokens = 0;
};

struct GenResponse {
  std::string text;
  FinishReason finish_reason = FinishReason::Error;
  TokenUsage usage;
  GenErrorKind error_kind = GenErrorKind::None;
  std::string error_message;
  int attempts = 1;

  bool ok() const { return finish_reason != FinishReason::Error; }

  static GenResponse failure(GenErrorKind kind, std::string message) {
    GenResponse out;
    out.error_kind = kind;
    out.error_message = std::move(message);
    return out;
  }
};

// Rough provider-neutral estimate: four characters per token.
inline int estimate_tokens(std::string_view text) { return static_cast<int>((text.size() + 3) / 4); }

// Empty when the request is well formed.
inline std::optional<std::string> request_problem(const GenRequest& request) {
  if (request.prompt.empty()) return "prompt is empty";
  if (request.max_output_tokens <= 0) return "max_output_tokens must be positive";
  if (!(request.temperature >= 0.0 && request.temperature <= 2.0)) return "temperature must lie in [0, 2]";
  return std::nullopt;
}

// Implementations must be safe to call from several threads at once and
// report failures through the response, never by throwing.
class GenerationClient {
 public:
  virtual ~GenerationClient() = default;
  virtual GenResponse generate(const GenRequest& request) = 0;
};

struct RetryPolicy {
  int max_retries = 3;
  double initial_backoff_ms = 500.0;
  double multiplier = 2.0;
  double max_backoff_ms = 8000.0;

  bool operator==(const RetryPolicy&) const = default;
};

inline double backoff_ms(const RetryPolicy& policy, int retry) {
  return std::min(policy.max_backoff_ms, policy.initial_backoff_ms * std::pow(policy.multiplier, retry));
}

// Retries transient failures of an inner client with exponential backoff.
class RetryingClient : public GenerationClient {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;
  using Logger = std::function<void(const std::string&)>;

  RetryingClient(std::shared_ptr<GenerationClient> inner, RetryPolicy policy, Sleeper sleeper = {},
                 Logger logger = {})
      : inner_(std::move(inner)), policy_(policy), sleeper_(std::move(sleeper)), logger_(std::move(logger)) {
    if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }

  GenResponse generate(const GenRequest& request) override {
    int attempt = 1;
    for (;; ++attempt) {
      GenResponse response = inner_->generate(request);
      response.attempts = attempt;
      if (response.ok()) {
        if (attempt > 1) log("request " + request.request_tag + ": succeeded on attempt " + std::to_string(attempt));
        return response;
      }
      const std::string what = "request " + request.request_tag + ": attempt " + std::to_string(attempt) +
                               " failed (" + std::string(to_string(response.error_kind)) + "): " +
                               response.error_message;
      if (!is_transient(response.error_kind) || attempt > policy_.max_retries) {
        log(what + "; giving up");
        return response;
      }
      const double wait = backoff_ms(policy_, attempt - 1);
      log(what + "; retrying in " + std::to_string(static_cast<long long>(wait)) + " ms");
      sleeper_(std::chrono::milliseconds(static_cast<long long>(wait)));
    }
  }

 private:
  void log(const std::string& line) {
    if (logger_) logger_(line);
  }

  std::shared_ptr<GenerationClient> inner_;
  RetryPolicy policy_;
  Sleeper sleeper_;
  Logger logger_;
};

// Runs every request with at most max_in_flight outstanding. Responses come
// back in request order; an exception escaping the client becomes an error
// response for that request only.
inline std::vector<GenResponse> generate_batch(GenerationClient& client, const std::vector<GenRequest>& requests,
                                               std::size_t max_in_flight) {
  if (max_in_flight < 1) max_in_flight = 1;
  std::vector<GenResponse> out(requests.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < requests.size(); i = next.fetch_add(1)) {
      try {
        out[i] = client.generate(requests[i]);
      } catch (const std::exception& e) {
        out[i] = GenResponse::failure(GenErrorKind::Server, e.what());
      } catch (...) {
        out[i] = GenResponse::failure(GenErrorKind::Server, "unknown failure");
      }
    }
  };
  const std::size_t threads = std::min(max_in_flight, requests.size());
  if (threads <= 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& thread : pool) thread.join();
  return out;
}

}  // namespace opsynth
