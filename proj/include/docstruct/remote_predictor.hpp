// Copyright 2026 The docstruct Authors.
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

#include <chrono>
#include <cstdlib>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "docstruct/errors.hpp"
#include "docstruct/predictor.hpp"

namespace docstruct {

struct RemoteConfig {
  std::string base_url = "http://127.0.0.1:8080";  // scheme://host:port
  std::string path = "/generate";
  int timeout_ms = 30000;
  int max_attempts = 3;  // total attempts, including the first
  int initial_backoff_ms = 200;
  int tokens_per_action = 8;  // max_new_tokens = tokens_per_action * expected
  std::string api_key;        // sent as a bearer token when non-empty

  /// Reads DOCSTRUCT_API_KEY if no key was given explicitly.
  void load_environment() {
    if (api_key.empty()) {
      if (const char* key = std::getenv("DOCSTRUCT_API_KEY")) api_key = key;
    }
  }
};

/// Text-in/text-out client for a generation service:
///   POST {"prompt", "max_new_tokens", "stop": ["###"]} -> {"text"}
/// Connection failures, timeouts, 429 and 5xx are retried with exponential
/// backoff. The generated text is forwarded unparsed.
class RemotePredictor final : public ActionPredictor {
 public:
  explicit RemotePredictor(RemoteConfig config) : config_(std::move(config)) {
    if (config_.max_attempts < 1) throw Error("max_attempts must be >= 1");
  }

  PredictionResponse predict(const PredictionRequest& request) override {
    const nlohmann::json body{
        {"prompt", request.prompt},
        {"max_new_tokens", config_.tokens_per_action *
                               static_cast<int>(request.expected_actions)},
        {"stop", {"###"}}};
    const std::string payload = body.dump();

    // One client per call keeps concurrent documents isolated.
    httplib::Client client(config_.base_url);
    const auto timeout = std::chrono::milliseconds(config_.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    if (!config_.api_key.empty()) client.set_bearer_token_auth(config_.api_key);

    int last_status = 0;
    std::string last_error;
    auto backoff = std::chrono::milliseconds(config_.initial_backoff_ms);
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
      const auto started = std::chrono::steady_clock::now();
      auto res = client.Post(config_.path, payload, "application/json");
      const double latency = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
      if (!res) {
        last_status = 0;
        last_error = httplib::to_string(res.error());
      } else if (res->status == 200) {
        try {
          const auto j = nlohmann::json::parse(res->body);
          return {j.at("text").get<std::string>(), latency};
        } catch (const nlohmann::json::exception& e) {
          throw PredictorError(std::string("bad response body: ") + e.what(),
                               res->status, attempt);
        }
      } else {
        last_status = res->status;
        last_error = "HTTP " + std::to_string(res->status);
        if (res->status != 429 && res->status < 500) {
          throw PredictorError("request rejected: " + last_error, last_status,
                               attempt);
        }
      }
      if (attempt < config_.max_attempts) {
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      }
    }
    throw PredictorError("remote predictor failed after " +
                             std::to_string(config_.max_attempts) +
                             " attempts: " + last_error,
                         last_status, config_.max_attempts);
  }

 private:
  RemoteConfig config_;
};

}  // namespace docstruct
