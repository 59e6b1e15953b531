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

// Models under test: a uniform handle over remote endpoints and offline
// mocks, with a content-addressed response cache in front.

#ifndef ROBUSTA_SUBJECTS_H_
#define ROBUSTA_SUBJECTS_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robusta/metrics.h"
#include "robusta/seed_task.h"

namespace robusta {

struct ModelResponse {
  std::string output_text;
  std::int64_t latency_ms = 0;
  bool from_cache = false;
};

enum class ModelKind { kRemote, kMock };

class Model {
 public:
  virtual ~Model() = default;
  virtual const std::string& id() const = 0;
  virtual ModelKind kind() const = 0;
  // Uncached generation. Throws ModelError.
  virtual ModelResponse Generate(std::string_view prompt) = 0;
};

struct CacheEntry {
  std::string model_id;
  std::string prompt_sha256;
  std::string output_text;
  std::int64_t latency_ms = 0;
  std::string created_at;
};

// Layout: <root>/<first two hex digits>/<digest>.json. Writes go to a temp
// file in the same directory and are renamed into place.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path root);

  // SHA-256 of model_id || 0x00 || prompt.
  static std::string Digest(std::string_view model_id, std::string_view prompt);

  // Corrupt entries are logged and reported as misses.
  std::optional<CacheEntry> Get(const std::string& digest) const;
  void Put(const std::string& digest, const CacheEntry& entry) const;

  std::filesystem::path PathFor(const std::string& digest) const;
  const std::filesystem::path& root() const { return root_; }

  struct Stats {
    std::size_t entries = 0;
    std::uintmax_t bytes = 0;
    std::map<std::string, std::size_t> per_model;
  };
  Stats Inspect() const;
  // Removes entries for `model_id`, or every entry when unset. Returns count.
  std::size_t Evict(const std::optional<std::string>& model_id) const;

 private:
  std::filesystem::path root_;
};

// Strips prose around the first fenced code block, if any.
std::string ExtractCode(std::string_view response);

// A model plus its cache and response post-processing.
class ModelHandle {
 public:
  ModelHandle(std::shared_ptr<Model> model,
              std::shared_ptr<ResponseCache> cache = nullptr,
              bool extract_code = true);

  const std::string& id() const { return model_->id(); }
  ModelKind kind() const { return model_->kind(); }

  // Cache hit: stored response with from_cache = true. Miss: generate and
  // persist before returning.
  ModelResponse Query(std::string_view prompt) const;

 private:
  std::shared_ptr<Model> model_;
  std::shared_ptr<ResponseCache> cache_;
  bool extract_code_;
};

inline ModelResponse Query(const ModelHandle& model, std::string_view prompt) {
  return model.Query(prompt);
}

struct RemoteModelOptions {
  std::string id;
  std::string endpoint;
  std::chrono::milliseconds timeout{60000};
  int retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  // Minimum spacing between requests to this model.
  std::chrono::milliseconds min_interval{0};
};

// POST {"prompt": ...} -> {"output": ...}. Sends "Authorization: Bearer
// $ROBUSTA_API_KEY" when the variable is set.
std::shared_ptr<Model> MakeRemoteModel(RemoteModelOptions options);

// Bounds concurrent remote requests across every remote model.
void SetGlobalInFlightLimit(std::size_t limit);

// Offline stand-in with a known safe zone: a prompt gets the base output of
// its nearest seed when its proximity key to that seed is <= theta, and
// `failure_output` otherwise.
class ThresholdMockModel : public Model {
 public:
  ThresholdMockModel(std::string id, std::vector<SeedTask> seeds,
                     std::map<std::string, std::string> base_outputs,
                     MetricScorer scorer, double theta,
                     std::string failure_output);

  const std::string& id() const override { return id_; }
  ModelKind kind() const override { return ModelKind::kMock; }
  ModelResponse Generate(std::string_view prompt) override;

  double theta() const { return theta_; }

 private:
  std::string id_;
  std::vector<SeedTask> seeds_;
  std::map<std::string, std::string> base_outputs_;
  MetricScorer scorer_;
  double theta_;
  std::string failure_output_;
};

inline constexpr std::string_view kDefaultFailureOutput = "<<mock failure>>";

// Base outputs come from each seed's reference solution, or a per-seed
// marker when there is none.
std::shared_ptr<ThresholdMockModel> MakeThresholdMock(
    const std::vector<SeedTask>& seeds, const MetricScorer& scorer,
    double theta, std::string id = "mock-threshold",
    std::string failure_output = std::string(kDefaultFailureOutput));

// Resolves the metric by name; throws ParseError for unknown ids.
std::shared_ptr<ThresholdMockModel> MakeThresholdMock(
    const std::vector<SeedTask>& seeds, std::string_view metric_id,
    double theta, const EmbeddingStore* store);

}  // namespace robusta

#endif  // ROBUSTA_SUBJECTS_H_
