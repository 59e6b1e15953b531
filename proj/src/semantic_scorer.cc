// Copyright 2026 The Robusta Authors
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

#include "robusta/semantic_scorer.h"

#include <thread>

#include "json.hpp"
#include "robusta/error.h"

namespace robusta {

SemanticScorer::SemanticScorer(SemanticScorerOptions options)
    : options_(std::move(options)),
      url_(ParseUrl(options_.endpoint)),
      limiter_(options_.max_in_flight) {}

double SemanticScorer::Score(std::string_view text_a, std::string_view text_b) {
  const std::string body =
      nlohmann::json{{"text_a", text_a}, {"text_b", text_b}}.dump();
  std::string last_error;
  auto backoff = options_.initial_backoff;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    std::optional<HttpResponse> res;
    {
      InFlightLimiter::Slot slot(limiter_);
      res = PostJson(url_, body, {}, options_.timeout);
    }
    if (!res) {
      last_error = "transport failure";
      continue;
    }
    if (res->status >= 400 && res->status < 500) {
      throw MetricUnavailableError("semantic scorer returned HTTP " +
                                       std::to_string(res->status) + ": " +
                                       res->body,
                                   false);
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    auto parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object() ||
        !parsed.contains("score") || !parsed["score"].is_number()) {
      last_error = "protocol error: response has no numeric 'score'";
      continue;
    }
    return parsed["score"].get<double>();
  }
  throw MetricUnavailableError("semantic scorer at " + options_.endpoint +
                                   " unavailable after " +
                                   std::to_string(options_.retries + 1) +
                                   " attempt(s): " + last_error,
                               true);
}

}  // namespace robusta
