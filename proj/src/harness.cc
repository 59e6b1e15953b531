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

#include "robusta/harness.h"

#include <algorithm>
#include <atomic>
#include <ctime>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "robusta/error.h"
#include "robusta/hashing.h"
#include "robusta/log.h"

namespace robusta {
namespace fs = std::filesystem;
namespace {

constexpr const char* kRunFile = "run.json";
constexpr const char* kPointsFile = "points.jsonl";

std::string UtcNow() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void WriteAtomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

nlohmann::json ParamsToJson(const ExplorationParams& p) {
  return {{"n", p.n},
          {"k", p.k},
          {"c_n", p.c_n},
          {"c_k", p.c_k},
          {"max_expansions", p.max_expansions},
          {"rng_seed", p.rng_seed},
          {"mutant_cap", p.mutant_cap}};
}

ExplorationParams ParamsFromJson(const nlohmann::json& j) {
  ExplorationParams p;
  p.n = j.at("n").get<int>();
  p.k = j.at("k").get<int>();
  p.c_n = j.at("c_n").get<int>();
  p.c_k = j.at("c_k").get<int>();
  p.max_expansions = j.at("max_expansions").get<int>();
  p.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  p.mutant_cap = j.at("mutant_cap").get<std::size_t>();
  return p;
}

nlohmann::json RunToJson(const RunRecord& run) {
  return {{"run_id", run.run_id},
          {"config", CanonicalConfig(run.config)},
          {"config_digest", run.config_digest},
          {"started_at", run.started_at},
          {"finished_at", run.finished_at},
          {"complete", run.complete},
          {"n_points", run.points.size()}};
}

CampaignConfig ConfigFromJson(const nlohmann::json& j) {
  CampaignConfig c;
  c.model_id = j.at("model_id").get<std::string>();
  c.metric = ParseMetricId(j.at("metric").get<std::string>());
  const auto& o = j.at("oracle");
  c.oracle.kind = ParseOracleKind(o.at("kind").get<std::string>());
  if (!o.at("command").is_null()) c.oracle.command_template = o.at("command").get<std::string>();
  c.oracle.timeout = std::chrono::seconds(o.at("timeout_s").get<long>());
  c.params = ParamsFromJson(j.at("params"));
  return c;
}

// Reads stored points; a torn trailing line from an interrupted write is
// dropped with a warning.
std::vector<TippingPoint> ReadPoints(const fs::path& path) {
  std::vector<TippingPoint> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      LogWarning(path.string() + ": skipping unreadable line " + std::to_string(line_no));
      continue;
    }
    out.push_back(TippingPointFromJson(j));
  }
  return out;
}

TippingPoint ErrorPoint(const SeedTask& seed, MetricId metric,
                        const std::string& what) {
  TippingPoint p;
  p.seed_id = seed.id;
  p.metric = metric;
  p.ls.mutant.seed_id = seed.id;
  p.ls.mutant.text = seed.prompt;
  p.ls.metric = metric;
  p.status = TipStatus::kCensoredByError;
  p.error = what;
  return p;
}

}  // namespace

std::vector<SeedTask> ParseDataset(std::istream& in, const std::string& source) {
  std::vector<SeedTask> tasks;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw ParseError(source + ": line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) fail("malformed JSON");
    SeedTask t;
    if (!j.contains("id") || !(j["id"].is_string() || j["id"].is_number_integer())) {
      fail("missing 'id'");
    }
    t.id = j["id"].is_string() ? j["id"].get<std::string>()
                               : std::to_string(j["id"].get<long long>());
    if (!j.contains("prompt") || !j["prompt"].is_string()) fail("missing 'prompt'");
    t.prompt = j["prompt"].get<std::string>();
    if (Trim(t.prompt).empty()) fail("empty prompt for '" + t.id + "'");
    if (j.contains("topic") && !j["topic"].is_null()) {
      if (!j["topic"].is_string()) fail("'topic' must be a string");
      t.topic = j["topic"].get<std::string>();
    }
    if (j.contains("complexity") && !j["complexity"].is_null()) {
      if (!j["complexity"].is_number_integer() || j["complexity"].get<int>() < 1) {
        fail("'complexity' must be an integer >= 1");
      }
      t.complexity = j["complexity"].get<int>();
    }
    if (j.contains("reference") && j["reference"].is_string()) {
      t.reference_solution = j["reference"].get<std::string>();
    }
    if (j.contains("language") && j["language"].is_string()) {
      t.language_tag = j["language"].get<std::string>();
    }
    if (!ids.insert(t.id).second) fail("duplicate id '" + t.id + "'");
    tasks.push_back(std::move(t));
  }
  return tasks;
}

std::vector<SeedTask> LoadDataset(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open dataset " + path.string());
  return ParseDataset(in, path.string());
}

std::map<std::string, std::string> ParseConfig(std::istream& in,
                                               const std::string& source) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw ParseError(source + ": line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = Trim(trimmed.substr(0, eq));
    if (key.empty()) fail("empty key");
    std::string rest = Trim(trimmed.substr(eq + 1));
    std::string value;
    if (!rest.empty() && rest[0] == '"') {
      std::size_t i = 1;
      bool closed = false;
      for (; i < rest.size(); ++i) {
        if (rest[i] == '\\' && i + 1 < rest.size()) {
          value.push_back(rest[++i]);
        } else if (rest[i] == '"') {
          closed = true;
          ++i;
          break;
        } else {
          value.push_back(rest[i]);
        }
      }
      if (!closed) fail("unterminated string");
      const std::string tail = Trim(rest.substr(i));
      if (!tail.empty() && tail[0] != '#') fail("unexpected text after string");
    } else {
      const auto hash = rest.find('#');
      value = Trim(hash == std::string::npos ? rest : rest.substr(0, hash));
    }
    out[key] = value;
  }
  return out;
}

std::map<std::string, std::string> LoadConfigFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path.string());
  return ParseConfig(in, path.string());
}

nlohmann::json CanonicalConfig(const CampaignConfig& c) {
  return {{"model_id", c.model_id},
          {"metric", MetricName(c.metric)},
          {"oracle",
           {{"kind", OracleKindName(c.oracle.kind)},
            {"command", c.oracle.command_template
                            ? nlohmann::json(*c.oracle.command_template)
                            : nlohmann::json(nullptr)},
            {"timeout_s", c.oracle.timeout.count()}}},
          {"params", ParamsToJson(c.params)}};
}

std::string ConfigDigest(const CampaignConfig& config) {
  return Sha256Hex(CanonicalConfig(config).dump());
}

RunRecord RunCampaign(const std::vector<SeedTask>& dataset,
                      const ModelHandle& model, const MetricScorer& metric,
                      const OracleSpec& oracle, const EmbeddingStore& store,
                      const ExplorationParams& params,
                      const CampaignOptions& options) {
  if (dataset.empty()) throw PreconditionError("run_campaign: empty dataset");
  if (options.out_dir.empty()) throw PreconditionError("run_campaign: no output directory");
  Validate(params);
  Validate(oracle);
  {
    std::set<std::string> ids;
    for (const auto& s : dataset) {
      if (!ids.insert(s.id).second) {
        throw PreconditionError("run_campaign: duplicate seed id '" + s.id + "'");
      }
    }
  }

  RunRecord run;
  run.config = {model.id(), metric.id(), oracle, params};
  run.config_digest = ConfigDigest(run.config);
  run.run_id = run.config_digest.substr(0, 16);
  run.started_at = UtcNow();

  fs::create_directories(options.out_dir);
  const fs::path run_path = options.out_dir / kRunFile;
  const fs::path points_path = options.out_dir / kPointsFile;

  std::unordered_map<std::string, TippingPoint> done;
  if (fs::exists(run_path)) {
    const RunRecord previous = LoadRun(options.out_dir);
    if (previous.config_digest != run.config_digest) {
      throw PreconditionError("run directory " + options.out_dir.string() +
                              " holds a run with a different configuration");
    }
    run.started_at = previous.started_at;
    for (auto& p : previous.points) done.emplace(p.seed_id, std::move(p));
  }
  WriteAtomically(run_path, RunToJson(run).dump(2) + "\n");

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!done.contains(dataset[i].id)) pending.push_back(i);
  }

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  auto worker = [&] {
    while (!stop.load()) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= pending.size()) return;
      const SeedTask& seed = dataset[pending[slot]];
      TippingPoint point;
      try {
        point = ExploreSeed(seed, model, metric, oracle, store, params);
      } catch (const std::exception& e) {
        point = ErrorPoint(seed, metric.id(), e.what());
      }
      std::lock_guard lock(mu);
      {
        std::ofstream out(points_path, std::ios::binary | std::ios::app);
        out << ToJson(point).dump() << "\n";
        out.flush();
        if (!out) throw Error("cannot append to " + points_path.string());
      }
      const std::string id = point.seed_id;
      done.emplace(id, std::move(point));
      if (options.after_seed && options.after_seed(done.at(id))) stop = true;
    }
  };
  const std::size_t threads = std::max<std::size_t>(
      1, std::min(options.parallelism, pending.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (const auto& s : dataset) {
    if (auto it = done.find(s.id); it != done.end()) run.points.push_back(it->second);
  }
  run.complete = run.points.size() == dataset.size();
  if (run.complete) run.finished_at = UtcNow();
  WriteAtomically(run_path, RunToJson(run).dump(2) + "\n");
  return run;
}

RunRecord LoadRun(const fs::path& dir) {
  std::ifstream in(dir / kRunFile);
  if (!in) throw ParseError("no run record in " + dir.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto j = nlohmann::json::parse(ss.str(), nullptr, false);
  if (j.is_discarded()) throw ParseError((dir / kRunFile).string() + ": malformed JSON");
  RunRecord run;
  try {
    run.run_id = j.at("run_id").get<std::string>();
    run.config = ConfigFromJson(j.at("config"));
    run.config_digest = j.at("config_digest").get<std::string>();
    run.started_at = j.at("started_at").get<std::string>();
    run.finished_at = j.at("finished_at").get<std::string>();
    run.complete = j.at("complete").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError((dir / kRunFile).string() + ": " + e.what());
  }
  run.points = ReadPoints(dir / kPointsFile);
  std::sort(run.points.begin(), run.points.end(),
            [](const auto& a, const auto& b) { return a.seed_id < b.seed_id; });
  return run;
}

}  // namespace robusta
