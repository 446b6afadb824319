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

// Live client for JSON chat-completion endpoints:
//   POST {"model", "messages": [{"role": "user", "content"}], "temperature", "max_tokens"}
//   <- {"choices": [{"message": {"content"}, "finish_reason"}], "usage": {...}}
// Link against opsynth_http for https:// endpoints.

#pragma once

#include <httplib.h>

#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>

#include "opsynth/core/json_io.hpp"
#include "opsynth/genclient/client.hpp"

namespace opsynth {

inline constexpr const char* kApiKeyEnv = "GEN_API_KEY";

struct HttpClientConfig {
  std::string endpoint;  // full URL, e.g. https://host/v1/chat/completions
  std::string model_name;
  std::string api_key;
  int timeout_seconds = 120;
};

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

inline ParsedUrl parse_endpoint(const std::string& url) {
  const std::size_t scheme = url.find("://");
  if (scheme == std::string::npos) throw std::invalid_argument("endpoint must start with http:// or https://");
  const std::string prefix = url.substr(0, scheme);
  if (prefix != "http" && prefix != "https") throw std::invalid_argument("unsupported endpoint scheme " + prefix);
  const std::size_t slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

inline std::optional<std::string> api_key_from_env() {
  const char* key = std::getenv(kApiKeyEnv);
  if (key == nullptr || *key == '\0') return std::nullopt;
  return std::string(key);
}

inline GenErrorKind classify_status(int status) {
  if (status == 401 || status == 403) return GenErrorKind::Auth;
  if (status == 429) return GenErrorKind::RateLimit;
  if (status >= 500) return GenErrorKind::Server;
  return GenErrorKind::InvalidRequest;
}

class HttpClient : public GenerationClient {
 public:
  explicit HttpClient(HttpClientConfig config) : config_(std::move(config)), url_(parse_endpoint(config_.endpoint)) {}

  GenResponse generate(const GenRequest& request) override {
    if (auto problem = request_problem(request)) return GenResponse::failure(GenErrorKind::InvalidRequest, *problem);
    Json body = {{"model", config_.model_name},
                 {"messages", Json::array({{{"role", "user"}, {"content", request.prompt}}})},
                 {"temperature", request.temperature},
                 {"max_tokens", request.max_output_tokens}};
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
    if (!request.request_tag.empty()) headers.emplace("X-Request-Tag", request.request_tag);

    // httplib::Client is not thread-safe; one per call keeps the client shareable.
    httplib::Client http(url_.origin);
    http.set_connection_timeout(config_.timeout_seconds, 0);
    http.set_read_timeout(config_.timeout_seconds, 0);
    http.set_write_timeout(config_.timeout_seconds, 0);
    auto result = http.Post(url_.path, headers, body.dump(), "application/json");
    if (!result) {
      return GenResponse::failure(GenErrorKind::Network, "request failed: " + httplib::to_string(result.error()));
    }
    if (result->status != 200) {
      return GenResponse::failure(classify_status(result->status),
                                  "HTTP " + std::to_string(result->status) + ": " + provider_message(result->body));
    }
    return parse_completion(result->body, request);
  }

  static GenResponse parse_completion(const std::string& body, const GenRequest& request) {
    Json doc = Json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("choices") || !doc["choices"].is_array() ||
        doc["choices"].empty()) {
      return GenResponse::failure(GenErrorKind::Server, "malformed completion response");
    }
    const Json& choice = doc["choices"][0];
    GenResponse out;
    if (choice.contains("message") && choice["message"].contains("content") &&
        choice["message"]["content"].is_string()) {
      out.text = choice["message"]["content"].get<std::string>();
    }
    const std::string finish = choice.value("finish_reason", std::string("stop"));
    out.finish_reason = finish == "length" ? FinishReason::Length : FinishReason::Complete;
    if (out.text.empty()) return GenResponse::failure(GenErrorKind::Server, "completion has no text");
    out.usage.prompt_tokens = estimate_tokens(request.prompt);
    out.usage.output_tokens = estimate_tokens(out.text);
    if (doc.contains("usage") && doc["usage"].is_object()) {
      const Json& usage = doc["usage"];
      if (usage.contains("prompt_tokens") && usage["prompt_tokens"].is_number_integer()) {
        out.usage.prompt_tokens = usage["prompt_tokens"].get<int>();
      }
      if (usage.contains("completion_tokens") && usage["completion_tokens"].is_number_integer()) {
        out.usage.output_tokens = usage["completion_tokens"].get<int>();
      }
    }
    return out;
  }

 private:
  static std::string provider_message(const std::string& body) {
    Json doc = Json::parse(body, nullptr, false);
    if (!doc.is_discarded() && doc.is_object() && doc.contains("error")) {
      const Json& error = doc["error"];
      if (error.is_string()) return error.get<std::string>();
      if (error.is_object() && error.contains("message") && error["message"].is_string()) {
        return error["message"].get<std::string>();
      }
    }
    return body.substr(0, 200);
  }

  HttpClientConfig config_;
  ParsedUrl url_;
};

}  // namespace opsynth
