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

#ifndef ROBUSTA_SEMANTIC_SCORER_H_
#define ROBUSTA_SEMANTIC_SCORER_H_

#include <chrono>
#include <cstddef>
#include <string>
#include <string_view>

#include "robusta/http_client.h"

namespace robusta {

struct SemanticScorerOptions {
  std::string endpoint;  // POST target
  std::chrono::milliseconds timeout{10000};
  int retries = 3;  // extra attempts after the first
  std::chrono::milliseconds initial_backoff{200};
  std::size_t max_in_flight = 4;
};

// Client for a remote sentence-pair similarity model.
// Wire protocol: POST {"text_a": ..., "text_b": ...} -> {"score": number}.
class SemanticScorer {
 public:
  explicit SemanticScorer(SemanticScorerOptions options);

  // Throws MetricUnavailableError once retries are exhausted, or immediately
  // on a 4xx response.
  double Score(std::string_view text_a, std::string_view text_b);

 private:
  SemanticScorerOptions options_;
  Url url_;
  InFlightLimiter limiter_;
};

}  // namespace robusta

#endif  // ROBUSTA_SEMANTIC_SCORER_H_
