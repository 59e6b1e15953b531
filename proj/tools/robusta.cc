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

// robusta: command-line front end for paraphrase generation, robustness
// campaigns and analysis of stored runs.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "robusta/analysis.h"
#include "robusta/embeddings.h"
#include "robusta/error.h"
#include "robusta/explorer.h"
#include "robusta/harness.h"
#include "robusta/log.h"
#include "robusta/metrics.h"
#include "robusta/oracles.h"
#include "robusta/paraphraser.h"
#include "robusta/report.h"
#include "robusta/semantic_scorer.h"
#include "robusta/subjects.h"
#include "robusta/tree.h"

namespace {

using namespace robusta;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitPartial = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every setting that may come from a flag or the config file. Keys use
// underscores; flags use the same names with dashes.
const std::map<std::string, std::string>& Defaults() {
  static const std::map<std::string, std::string> kDefaults = {
      {"dataset", ""},
      {"embeddings", ""},
      {"embeddings_dim", ""},
      {"model", "mock"},
      {"endpoint", ""},
      {"model_timeout_ms", "60000"},
      {"model_retries", "3"},
      {"max_in_flight", "8"},
      {"extract_code", "true"},
      {"mock_theta", "2"},
      {"metric", "lev_word"},
      {"semantic_endpoint", ""},
      {"oracle", "normalized"},
      {"oracle_cmd", ""},
      {"oracle_timeout_s", "60"},
      {"n", "5"},
      {"k", "5"},
      {"cn", "1"},
      {"ck", "1"},
      {"max_expansions", "3"},
      {"rng_seed", "0"},
      {"mutant_cap", std::to_string(kDefaultMutantCap)},
      {"parallelism", "1"},
      {"cache_dir", ""},
      {"out", ""},
      {"format", "both"},
  };
  return kDefaults;
}

class Settings {
 public:
  void Bind(CLI::App* app, const std::string& key, const std::string& help) {
    if (!Defaults().contains(key)) throw std::logic_error("unknown setting " + key);
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    CLI::Option* opt = app->add_option(flag, cli_[key], help + " [" + Defaults().at(key) + "]");
    options_.emplace_back(key, opt);
  }
  void BindConfig(CLI::App* app) {
    app->add_option("--config", config_path_, "key = value settings file");
  }

  // Precedence: flag, then config file, then default.
  void Resolve() {
    values_ = Defaults();
    if (!config_path_.empty()) {
      for (const auto& [raw_key, value] : LoadConfigFile(config_path_)) {
        std::string key = raw_key;
        std::replace(key.begin(), key.end(), '-', '_');
        if (key == "c_n") key = "cn";
        if (key == "c_k") key = "ck";
        if (!values_.contains(key)) {
          throw UsageError(config_path_ + ": unknown setting '" + key + "'");
        }
        values_[key] = value;
      }
    }
    for (const auto& [key, opt] : options_) {
      if (opt->count() > 0) values_[key] = cli_[key];
    }
  }

  const std::string& Str(const std::string& key) const { return values_.at(key); }

  std::string Required(const std::string& key) const {
    const std::string& v = values_.at(key);
    if (v.empty()) throw UsageError("missing required setting '" + key + "'");
    return v;
  }

  template <typename T>
  T Num(const std::string& key) const {
    const std::string& v = values_.at(key);
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      throw UsageError("setting '" + key + "' has invalid value '" + v + "'");
    }
    return out;
  }

  double Real(const std::string& key) const {
    const std::string& v = values_.at(key);
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw UsageError("setting '" + key + "' has invalid value '" + v + "'");
  }

  bool Bool(const std::string& key) const {
    const std::string& v = values_.at(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw UsageError("setting '" + key + "' must be true or false");
  }

 private:
  std::map<std::string, std::string> cli_;
  std::vector<std::pair<std::string, CLI::Option*>> options_;
  std::string config_path_;
  std::map<std::string, std::string> values_;
};

ExplorationParams Params(const Settings& s) {
  ExplorationParams p;
  p.n = s.Num<int>("n");
  p.k = s.Num<int>("k");
  p.c_n = s.Num<int>("cn");
  p.c_k = s.Num<int>("ck");
  p.max_expansions = s.Num<int>("max_expansions");
  p.rng_seed = s.Num<std::uint64_t>("rng_seed");
  p.mutant_cap = s.Num<std::size_t>("mutant_cap");
  return p;
}

std::unique_ptr<EmbeddingStore> Embeddings(const Settings& s) {
  std::optional<std::size_t> dim;
  if (!s.Str("embeddings_dim").empty()) dim = s.Num<std::size_t>("embeddings_dim");
  return std::make_unique<EmbeddingStore>(LoadEmbeddings(s.Required("embeddings"), dim));
}

MetricScorer Scorer(const std::string& name, const Settings& s,
                    const EmbeddingStore& store) {
  MetricId id;
  try {
    id = ParseMetricId(name);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  std::shared_ptr<SemanticScorer> semantic;
  if (id == MetricId::kSemantic) {
    SemanticScorerOptions opts;
    opts.endpoint = s.Required("semantic_endpoint");
    semantic = std::make_shared<SemanticScorer>(opts);
  }
  return MetricScorer(id, &store, semantic);
}

OracleSpec Oracle(const Settings& s) {
  OracleSpec spec;
  try {
    spec.kind = ParseOracleKind(s.Str("oracle"));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (!s.Str("oracle_cmd").empty()) spec.command_template = s.Str("oracle_cmd");
  spec.timeout = std::chrono::seconds(s.Num<long>("oracle_timeout_s"));
  try {
    Validate(spec);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return spec;
}

void WriteOut(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error("cannot write " + path);
}

int RunParaphrase(const Settings& s) {
  const auto dataset = LoadDataset(s.Required("dataset"));
  const auto store = Embeddings(s);
  const MetricScorer scorer = Scorer(s.Str("metric"), s, *store);
  const ExplorationParams p = Params(s);
  Validate(p);
  std::ostringstream out;
  for (const auto& seed : dataset) {
    const auto gen = GenerateParaphrases(seed, p.n, p.k, *store, p.mutant_cap);
    for (const auto& d : gen.diagnostics) LogWarning(seed.id + ": " + d);
    std::vector<ScoredMutant> scored;
    scored.reserve(gen.mutants.size());
    for (const auto& m : gen.mutants) scored.push_back(Score(m, scorer, seed.prompt));
    for (const auto& sm : SortMutants(std::move(scored), p.rng_seed)) {
      out << ToJson(sm).dump() << "\n";
    }
  }
  WriteOut(s.Str("out"), out.str());
  return kExitOk;
}

std::string ThetaLabel(double theta) {
  std::ostringstream os;
  os << theta;
  return os.str();
}

int RunEvaluate(const Settings& s) {
  const auto dataset = LoadDataset(s.Required("dataset"));
  const auto store = Embeddings(s);
  const std::string metric_name = s.Str("metric");
  const MetricScorer scorer = Scorer(metric_name, s, *store);
  const OracleSpec oracle = Oracle(s);
  const ExplorationParams params = Params(s);
  try {
    Validate(params);
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }

  std::shared_ptr<Model> model;
  const std::string model_name = s.Str("model");
  if (model_name == "mock") {
    const double theta = s.Real("mock_theta");
    model = MakeThresholdMock(dataset, scorer, theta,
                              "mock-" + metric_name + "-theta" + ThetaLabel(theta));
  } else {
    RemoteModelOptions opts;
    opts.id = model_name;
    opts.endpoint = s.Required("endpoint");
    opts.timeout = std::chrono::milliseconds(s.Num<long>("model_timeout_ms"));
    opts.retries = s.Num<int>("model_retries");
    SetGlobalInFlightLimit(s.Num<std::size_t>("max_in_flight"));
    model = MakeRemoteModel(opts);
  }
  std::shared_ptr<ResponseCache> cache;
  if (!s.Str("cache_dir").empty()) cache = std::make_shared<ResponseCache>(s.Str("cache_dir"));
  const ModelHandle handle(model, cache, s.Bool("extract_code"));

  CampaignOptions options;
  options.out_dir = s.Required("out");
  options.parallelism = s.Num<std::size_t>("parallelism");
  const ReportFormat format = ParseReportFormat(s.Str("format"));
  const RunRecord run =
      RunCampaign(dataset, handle, scorer, oracle, *store, params, options);

  const auto entries = Analyze({run}, dataset);
  EmitReport(entries, options.out_dir, format);

  std::size_t errors = 0, found = 0;
  for (const auto& p : run.points) {
    if (p.status == TipStatus::kCensoredByError) ++errors;
    if (p.status == TipStatus::kFound) ++found;
  }
  std::cerr << "run " << run.run_id << ": " << run.points.size() << " seeds, "
            << found << " found, " << errors << " errors\n";
  return errors > 0 ? kExitPartial : kExitOk;
}

int RunAnalyze(const Settings& s, const std::vector<std::string>& run_dirs) {
  if (run_dirs.empty()) throw UsageError("analyze: at least one --run is required");
  const auto dataset = LoadDataset(s.Required("dataset"));
  std::vector<RunRecord> runs;
  for (const auto& dir : run_dirs) runs.push_back(LoadRun(dir));
  const auto entries = Analyze(runs, dataset);
  const ReportFormat format = ParseReportFormat(s.Str("format"));
  if (s.Str("out").empty()) {
    if (format != ReportFormat::kCsv) std::cout << ReportJsonText(entries);
    if (format != ReportFormat::kJson) std::cout << ReportCsv(entries);
  } else {
    EmitReport(entries, s.Str("out"), format);
  }
  return kExitOk;
}

int RunDistinguish(const Settings& s, std::vector<std::string> metrics) {
  const auto dataset = LoadDataset(s.Required("dataset"));
  const auto store = Embeddings(s);
  const ExplorationParams p = Params(s);
  Validate(p);
  if (metrics.empty()) {
    for (const MetricId id : LocalMetrics()) metrics.emplace_back(MetricName(id));
  }
  std::vector<GenerationResult> families;
  for (const auto& seed : dataset) {
    families.push_back(GenerateParaphrases(seed, p.n, p.k, *store, p.mutant_cap));
  }
  nlohmann::json out = nlohmann::json::array();
  for (const auto& name : metrics) {
    const MetricScorer scorer = Scorer(name, s, *store);
    DistanceFamilies dist;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      auto& fam = dist[dataset[i].id];
      for (const auto& m : families[i].mutants) {
        fam.push_back(scorer.Raw(m.text, dataset[i].prompt));
      }
      if (fam.empty()) dist.erase(dataset[i].id);
    }
    if (dist.empty()) throw Error("distinguish: no seed produced any mutant");
    const auto r = Distinguishability(scorer.id(), dist);
    out.push_back({{"metric_id", name},
                   {"uniqueness_pct", r.uniqueness_pct},
                   {"distinctness", r.distinctness},
                   {"differentness", r.differentness},
                   {"n_families", dist.size()}});
  }
  WriteOut(s.Str("out"), out.dump(2) + "\n");
  return kExitOk;
}

LabeledTree ReadTree(const std::string& path, bool sexpr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  if (sexpr) return ParseSexpr(ss.str());
  auto result = BracketTree(ss.str());
  if (result.diagnostic) LogWarning(path + ": " + *result.diagnostic);
  return result.tree;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operational robustness evaluation of text-to-code models"};
  app.require_subcommand(1);
  Settings settings;

  auto* paraphrase = app.add_subcommand("paraphrase", "generate, score and order mutants");
  auto* evaluate = app.add_subcommand("evaluate", "run a campaign and write its report");
  auto* analyze = app.add_subcommand("analyze", "report on stored runs");
  auto* distinguish =
      app.add_subcommand("distinguish", "metric distinguishability over mutant families");
  auto* treedist = app.add_subcommand("treedist", "tree edit distance between two files");
  auto* cache = app.add_subcommand("cache", "inspect or evict the response cache");

  const std::map<std::string, std::string> help = {
      {"dataset", "JSONL seed tasks"},
      {"embeddings", "word vectors (text, optionally .gz)"},
      {"embeddings_dim", "expected vector dimension"},
      {"model", "'mock' or a remote model id"},
      {"endpoint", "remote model URL"},
      {"model_timeout_ms", "remote request timeout"},
      {"model_retries", "remote retries after the first attempt"},
      {"max_in_flight", "concurrent remote requests"},
      {"extract_code", "keep only the first fenced code block of outputs"},
      {"mock_theta", "mock safe-zone radius in proximity-key units"},
      {"metric", "distance metric id"},
      {"semantic_endpoint", "sentence-pair scorer URL for the semantic metric"},
      {"oracle", "exact | normalized | external_command"},
      {"oracle_cmd", "command template with {A} and {B}"},
      {"oracle_timeout_s", "external oracle timeout"},
      {"n", "initial neighbour rank"},
      {"k", "initial mutant order"},
      {"cn", "rank increment per expansion"},
      {"ck", "order increment per expansion"},
      {"max_expansions", "expansion budget per seed"},
      {"rng_seed", "tie-break seed"},
      {"mutant_cap", "mutants generated per seed"},
      {"parallelism", "seeds explored concurrently"},
      {"cache_dir", "response cache directory"},
      {"out", "output file or directory"},
      {"format", "json | csv | both"},
  };
  auto bind = [&](CLI::App* cmd, std::initializer_list<const char*> keys) {
    settings.BindConfig(cmd);
    for (const char* key : keys) settings.Bind(cmd, key, help.at(key));
  };
  bind(paraphrase, {"dataset", "embeddings", "embeddings_dim", "metric",
                    "semantic_endpoint", "n", "k", "rng_seed", "mutant_cap", "out"});
  bind(evaluate, {"dataset", "embeddings", "embeddings_dim", "model", "endpoint",
                  "model_timeout_ms", "model_retries", "max_in_flight", "extract_code",
                  "mock_theta", "metric", "semantic_endpoint", "oracle", "oracle_cmd",
                  "oracle_timeout_s", "n", "k", "cn", "ck", "max_expansions",
                  "rng_seed", "mutant_cap", "parallelism", "cache_dir", "out", "format"});
  std::vector<std::string> run_dirs;
  analyze->add_option("--run", run_dirs, "run directory (repeatable)");
  bind(analyze, {"dataset", "out", "format"});
  std::vector<std::string> metric_list;
  distinguish->add_option("--metrics", metric_list, "metric ids (default: all local)")
      ->delimiter(',');
  bind(distinguish, {"dataset", "embeddings", "embeddings_dim", "semantic_endpoint",
                     "n", "k", "mutant_cap", "out"});
  std::string tree_a, tree_b;
  bool sexpr = false;
  treedist->add_option("a", tree_a, "first file")->required();
  treedist->add_option("b", tree_b, "second file")->required();
  treedist->add_flag("--sexpr", sexpr, "inputs are s-expressions, not source code");
  cache->require_subcommand(1);
  auto* stats = cache->add_subcommand("stats", "entry counts per model");
  auto* evict = cache->add_subcommand("evict", "remove entries");
  std::string evict_model;
  evict->add_option("--model", evict_model, "only entries of this model");
  bind(stats, {"cache_dir"});
  bind(evict, {"cache_dir"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    settings.Resolve();
    if (*paraphrase) return RunParaphrase(settings);
    if (*evaluate) return RunEvaluate(settings);
    if (*analyze) return RunAnalyze(settings, run_dirs);
    if (*distinguish) return RunDistinguish(settings, metric_list);
    if (*treedist) {
      std::cout << TreeEditDistance(ReadTree(tree_a, sexpr), ReadTree(tree_b, sexpr))
                << "\n";
      return kExitOk;
    }
    const ResponseCache store(settings.Required("cache_dir"));
    if (*stats) {
      const auto st = store.Inspect();
      nlohmann::json j = {{"entries", st.entries},
                          {"bytes", st.bytes},
                          {"per_model", st.per_model}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::optional<std::string> model;
      if (!evict_model.empty()) model = evict_model;
      std::cout << store.Evict(model) << " entries removed\n";
    }
    return kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
