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

#include "robusta/subjects.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "json.hpp"
#include "robusta/error.h"
#include "robusta/hashing.h"
#include "robusta/http_client.h"
#include "robusta/log.h"

namespace robusta {
namespace fs = std::filesystem;
namespace {

std::string UtcNow() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string TempSuffix() {
  static std::atomic<unsigned long> counter{0};
  std::ostringstream os;
  os << ".tmp." << ::getpid() << "."
     << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "."
     << counter.fetch_add(1);
  return os.str();
}

std::optional<CacheEntry> ParseEntry(const std::string& text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  for (const char* key : {"model_id", "prompt_sha256", "output_text", "created_at"}) {
    if (!j.contains(key) || !j[key].is_string()) return std::nullopt;
  }
  if (!j.contains("latency_ms") || !j["latency_ms"].is_number_integer()) {
    return std::nullopt;
  }
  return CacheEntry{j["model_id"].get<std::string>(),
                    j["prompt_sha256"].get<std::string>(),
                    j["output_text"].get<std::string>(),
                    j["latency_ms"].get<std::int64_t>(),
                    j["created_at"].get<std::string>()};
}

std::optional<std::string> ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::mutex& GlobalLimiterMutex() {
  static std::mutex mu;
  return mu;
}

std::shared_ptr<InFlightLimiter>& GlobalLimiter() {
  static auto limiter = std::make_shared<InFlightLimiter>(8);
  return limiter;
}

class RemoteModel : public Model {
 public:
  explicit RemoteModel(RemoteModelOptions options)
      : options_(std::move(options)), url_(ParseUrl(options_.endpoint)) {
    if (options_.id.empty()) throw PreconditionError("remote model needs an id");
  }

  const std::string& id() const override { return options_.id; }
  ModelKind kind() const override { return ModelKind::kRemote; }

  ModelResponse Generate(std::string_view prompt) override {
    const std::string body = nlohmann::json{{"prompt", prompt}}.dump();
    std::map<std::string, std::string> headers;
    if (const char* key = std::getenv("ROBUSTA_API_KEY"); key && *key) {
      headers["Authorization"] = std::string("Bearer ") + key;
    }
    std::shared_ptr<InFlightLimiter> limiter;
    {
      std::lock_guard lock(GlobalLimiterMutex());
      limiter = GlobalLimiter();
    }
    std::string last_error;
    auto backoff = options_.initial_backoff;
    for (int attempt = 0; attempt <= options_.retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      }
      WaitForRateLimit();
      const auto start = std::chrono::steady_clock::now();
      std::optional<HttpResponse> res;
      {
        InFlightLimiter::Slot slot(*limiter);
        res = PostJson(url_, body, headers, options_.timeout);
      }
      const auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - start);
      if (!res) {
        last_error = "transport failure or timeout";
        continue;
      }
      if (res->status >= 400 && res->status < 500) {
        throw ModelError("model '" + options_.id + "' returned HTTP " +
                             std::to_string(res->status) + ": " + res->body,
                         false);
      }
      if (res->status != 200) {
        last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
        continue;
      }
      auto j = nlohmann::json::parse(res->body, nullptr, false);
      if (j.is_discarded() || !j.is_object() || !j.contains("output") ||
          !j["output"].is_string()) {
        last_error = "protocol error: response has no string 'output'";
        continue;
      }
      return {j["output"].get<std::string>(), latency.count(), false};
    }
    throw ModelError("model '" + options_.id + "' failed after " +
                         std::to_string(options_.retries + 1) +
                         " attempt(s): " + last_error,
                     true);
  }

 private:
  void WaitForRateLimit() {
    if (options_.min_interval.count() <= 0) return;
    std::unique_lock lock(rate_mu_);
    const auto now = std::chrono::steady_clock::now();
    if (next_allowed_ > now) {
      const auto wait = next_allowed_ - now;
      next_allowed_ += options_.min_interval;
      lock.unlock();
      std::this_thread::sleep_for(wait);
    } else {
      next_allowed_ = now + options_.min_interval;
    }
  }

  RemoteModelOptions options_;
  Url url_;
  std::mutex rate_mu_;
  std::chrono::steady_clock::time_point next_allowed_{};
};

}  // namespace

ResponseCache::ResponseCache(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_);
}

std::string ResponseCache::Digest(std::string_view model_id,
                                  std::string_view prompt) {
  std::string material;
  material.reserve(model_id.size() + 1 + prompt.size());
  material.append(model_id);
  material.push_back('\0');
  material.append(prompt);
  return Sha256Hex(material);
}

fs::path ResponseCache::PathFor(const std::string& digest) const {
  if (digest.size() < 2) throw PreconditionError("cache digest too short");
  return root_ / digest.substr(0, 2) / (digest + ".json");
}

std::optional<CacheEntry> ResponseCache::Get(const std::string& digest) const {
  const fs::path path = PathFor(digest);
  std::error_code ec;
  if (!fs::exists(path, ec)) return std::nullopt;
  auto text = ReadFile(path);
  std::optional<CacheEntry> entry;
  if (text) entry = ParseEntry(*text);
  if (!entry) {
    LogWarning("cache entry " + path.string() + " is corrupt; treating as miss");
  }
  return entry;
}

void ResponseCache::Put(const std::string& digest, const CacheEntry& entry) const {
  const fs::path path = PathFor(digest);
  fs::create_directories(path.parent_path());
  const nlohmann::json j = {{"model_id", entry.model_id},
                            {"prompt_sha256", entry.prompt_sha256},
                            {"output_text", entry.output_text},
                            {"latency_ms", entry.latency_ms},
                            {"created_at", entry.created_at}};
  const fs::path tmp = path.string() + TempSuffix();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << j.dump(2) << "\n";
    if (!out) throw Error("cannot write cache entry " + tmp.string());
  }
  fs::rename(tmp, path);
}

ResponseCache::Stats ResponseCache::Inspect() const {
  Stats stats;
  for (const auto& e : fs::recursive_directory_iterator(root_)) {
    if (!e.is_regular_file() || e.path().extension() != ".json") continue;
    ++stats.entries;
    stats.bytes += e.file_size();
    auto text = ReadFile(e.path());
    auto entry = text ? ParseEntry(*text) : std::nullopt;
    ++stats.per_model[entry ? entry->model_id : "<corrupt>"];
  }
  return stats;
}

std::size_t ResponseCache::Evict(const std::optional<std::string>& model_id) const {
  std::vector<fs::path> doomed;
  for (const auto& e : fs::recursive_directory_iterator(root_)) {
    if (!e.is_regular_file() || e.path().extension() != ".json") continue;
    if (model_id) {
      auto text = ReadFile(e.path());
      auto entry = text ? ParseEntry(*text) : std::nullopt;
      if (!entry || entry->model_id != *model_id) continue;
    }
    doomed.push_back(e.path());
  }
  for (const auto& p : doomed) fs::remove(p);
  return doomed.size();
}

std::string ExtractCode(std::string_view response) {
  const auto open = response.find("```");
  if (open == std::string_view::npos) return std::string(response);
  auto body_start = response.find('\n', open);
  if (body_start == std::string_view::npos) return std::string(response);
  ++body_start;
  const auto close = response.find("```", body_start);
  std::string_view body = response.substr(
      body_start, close == std::string_view::npos ? std::string_view::npos
                                                  : close - body_start);
  return std::string(body);
}

ModelHandle::ModelHandle(std::shared_ptr<Model> model,
                         std::shared_ptr<ResponseCache> cache,
                         bool extract_code)
    : model_(std::move(model)), cache_(std::move(cache)),
      extract_code_(extract_code) {
  if (!model_) throw PreconditionError("model handle needs a model");
}

ModelResponse ModelHandle::Query(std::string_view prompt) const {
  if (prompt.empty()) throw PreconditionError("query: empty prompt");
  ModelResponse response;
  std::string digest;
  bool hit = false;
  if (cache_) {
    digest = ResponseCache::Digest(model_->id(), prompt);
    if (auto entry = cache_->Get(digest);
        entry && entry->model_id == model_->id() &&
        entry->prompt_sha256 == Sha256Hex(prompt)) {
      response = {entry->output_text, entry->latency_ms, true};
      hit = true;
    }
  }
  if (!hit) {
    response = model_->Generate(prompt);
    response.from_cache = false;
    if (cache_) {
      cache_->Put(digest, {model_->id(), Sha256Hex(prompt), response.output_text,
                           response.latency_ms, UtcNow()});
    }
  }
  if (extract_code_) response.output_text = ExtractCode(response.output_text);
  return response;
}

std::shared_ptr<Model> MakeRemoteModel(RemoteModelOptions options) {
  return std::make_shared<RemoteModel>(std::move(options));
}

void SetGlobalInFlightLimit(std::size_t limit) {
  std::lock_guard lock(GlobalLimiterMutex());
  GlobalLimiter() = std::make_shared<InFlightLimiter>(limit);
}

ThresholdMockModel::ThresholdMockModel(
    std::string id, std::vector<SeedTask> seeds,
    std::map<std::string, std::string> base_outputs, MetricScorer scorer,
    double theta, std::string failure_output)
    : id_(std::move(id)), seeds_(std::move(seeds)),
      base_outputs_(std::move(base_outputs)), scorer_(std::move(scorer)),
      theta_(theta), failure_output_(std::move(failure_output)) {
  if (seeds_.empty()) throw PreconditionError("threshold mock needs seeds");
  const auto& d = scorer_.descriptor();
  const double key_min = d.orientation == Orientation::kDistance ? d.range_min
                                                                 : -d.range_max;
  if (std::isnan(theta_) || theta_ < key_min - 1e-9) {
    throw PreconditionError("threshold mock: theta below the key range of " +
                            std::string(MetricName(d.id)));
  }
  for (const auto& s : seeds_) {
    if (!base_outputs_.contains(s.id)) {
      throw PreconditionError("threshold mock: no base output for " + s.id);
    }
    if (base_outputs_[s.id] == failure_output_) {
      throw PreconditionError("threshold mock: base output equals failure output");
    }
  }
}

ModelResponse ThresholdMockModel::Generate(std::string_view prompt) {
  const SeedTask* nearest = nullptr;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : seeds_) {
    const double key = scorer_.Key(scorer_.Raw(prompt, s.prompt));
    if (nearest == nullptr || key < best) {
      best = key;
      nearest = &s;
    }
  }
  if (best <= theta_) return {base_outputs_.at(nearest->id), 0, false};
  return {failure_output_, 0, false};
}

std::shared_ptr<ThresholdMockModel> MakeThresholdMock(
    const std::vector<SeedTask>& seeds, const MetricScorer& scorer,
    double theta, std::string id, std::string failure_output) {
  std::map<std::string, std::string> base;
  for (const auto& s : seeds) {
    base[s.id] = s.reference_solution ? *s.reference_solution
                                      : "<<base output for " + s.id + ">>";
  }
  return std::make_shared<ThresholdMockModel>(std::move(id), seeds,
                                              std::move(base), scorer, theta,
                                              std::move(failure_output));
}

std::shared_ptr<ThresholdMockModel> MakeThresholdMock(
    const std::vector<SeedTask>& seeds, std::string_view metric_id,
    double theta, const EmbeddingStore* store) {
  return MakeThresholdMock(seeds, MetricScorer(ParseMetricId(metric_id), store),
                           theta);
}

}  // namespace robusta
