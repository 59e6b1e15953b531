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

#include "robusta/explorer.h"

#include <algorithm>
#include <iterator>
#include <unordered_set>

#include "robusta/error.h"
#include "robusta/hashing.h"

namespace robusta {
namespace {

TestedMutant MakeTested(ScoredMutant scored, std::uint64_t rng_seed) {
  TestedMutant t;
  t.tie_break = TieBreak(rng_seed, scored.mutant.seed_id, scored.mutant.text);
  t.scored = std::move(scored);
  return t;
}

TraceEntry ToTrace(const TestedMutant& t, int round) {
  return {t.scored.mutant.text, t.scored.raw_value, t.scored.proximity_key,
          t.failed, t.scored.mutant.order_k, t.scored.mutant.max_rank_n, round};
}

void SetLastSuccess(TippingPoint& tp, const std::optional<TestedMutant>& ls,
                    const ScoredMutant& self) {
  if (ls) {
    tp.ls = ls->scored;
    tp.ls_is_seed = false;
    tp.ls_output = ls->output;
  } else {
    tp.ls = self;
    tp.ls_is_seed = true;
    tp.ls_output = tp.seed_output;
  }
}

}  // namespace

void Validate(const ExplorationParams& p) {
  if (p.n < 1 || p.k < 1) throw PreconditionError("n and k must be >= 1");
  if (p.c_n < 0 || p.c_k < 0 || p.c_n + p.c_k < 1) {
    throw PreconditionError("c_n, c_k must be >= 0 with c_n + c_k >= 1");
  }
  if (p.max_expansions < 0) throw PreconditionError("max_expansions must be >= 0");
  if (p.mutant_cap < 1) throw PreconditionError("mutant_cap must be >= 1");
}

ScoredMutant Score(const Mutant& mutant, const MetricScorer& scorer,
                   std::string_view seed_prompt) {
  ScoredMutant s;
  s.mutant = mutant;
  s.metric = scorer.id();
  s.raw_value = scorer.Raw(mutant.text, seed_prompt);
  s.proximity_key = scorer.Key(s.raw_value);
  return s;
}

std::uint64_t TieBreak(std::uint64_t rng_seed, std::string_view seed_id,
                       std::string_view text) {
  const std::uint64_t stream = SplitMix64(Fnv1a64(seed_id, SplitMix64(rng_seed)));
  return SplitMix64(stream ^ Fnv1a64(text));
}

bool ExplorationLess(const TestedMutant& a, const TestedMutant& b) {
  if (a.scored.proximity_key != b.scored.proximity_key) {
    return a.scored.proximity_key < b.scored.proximity_key;
  }
  if (a.tie_break != b.tie_break) return a.tie_break < b.tie_break;
  return a.scored.mutant.text < b.scored.mutant.text;
}

std::vector<ScoredMutant> SortMutants(std::vector<ScoredMutant> scored,
                                      std::uint64_t rng_seed) {
  for (const auto& s : scored) {
    if (s.metric != scored.front().metric) {
      throw PreconditionError("sort_mutants: mutants scored with mixed metrics");
    }
  }
  std::vector<TestedMutant> keyed;
  keyed.reserve(scored.size());
  for (auto& s : scored) keyed.push_back(MakeTested(std::move(s), rng_seed));
  std::stable_sort(keyed.begin(), keyed.end(), ExplorationLess);
  std::vector<ScoredMutant> out;
  out.reserve(keyed.size());
  for (auto& t : keyed) out.push_back(std::move(t.scored));
  return out;
}

MergeResult MergeExpansion(const std::vector<TestedMutant>& previous_sorted,
                           const std::vector<TestedMutant>& new_results) {
  for (const auto& t : previous_sorted) {
    if (t.failed) {
      throw PreconditionError(
          "merge_expansion: a previously tested mutant failed");
    }
  }
  auto ff = std::find_if(new_results.begin(), new_results.end(),
                         [](const TestedMutant& t) { return t.failed; });
  if (ff == new_results.end()) {
    throw PreconditionError("merge_expansion: the new round has no failure");
  }
  MergeResult result{std::nullopt, *ff};
  if (ff != new_results.begin()) result.last_success = *std::prev(ff);

  // Largest earlier mutant ordered before the first failure.
  auto bound = std::lower_bound(previous_sorted.begin(), previous_sorted.end(),
                                *ff, ExplorationLess);
  if (bound != previous_sorted.begin()) {
    const TestedMutant& candidate = *std::prev(bound);
    if (!result.last_success || ExplorationLess(*result.last_success, candidate)) {
      result.last_success = candidate;
    }
  }
  return result;
}

std::string_view TipStatusName(TipStatus status) {
  switch (status) {
    case TipStatus::kFound: return "found";
    case TipStatus::kCensoredNoFailure: return "censored_no_failure";
    case TipStatus::kCensoredByError: return "censored_by_error";
  }
  return "?";
}

TipStatus ParseTipStatus(std::string_view name) {
  if (name == "found") return TipStatus::kFound;
  if (name == "censored_no_failure") return TipStatus::kCensoredNoFailure;
  if (name == "censored_by_error") return TipStatus::kCensoredByError;
  throw ParseError("unknown tipping-point status '" + std::string(name) + "'");
}

TippingPoint ExploreSeed(const SeedTask& seed, const ModelHandle& model,
                         const MetricScorer& metric, const OracleSpec& oracle,
                         const EmbeddingStore& store,
                         const ExplorationParams& params) {
  Validate(params);
  TippingPoint tp;
  tp.seed_id = seed.id;
  tp.metric = metric.id();

  ScoredMutant self;
  self.mutant.seed_id = seed.id;
  self.mutant.text = seed.prompt;
  self.metric = metric.id();
  self.raw_value = metric.Raw(seed.prompt, seed.prompt);
  self.proximity_key = metric.Key(self.raw_value);
  tp.ls = self;

  int n = params.n;
  int k = params.k;
  tp.final_n = n;
  tp.final_k = k;

  try {
    tp.seed_output = model.Query(seed.prompt).output_text;
    tp.ls_output = tp.seed_output;
    tp.queries_used = 1;
  } catch (const Error& e) {
    tp.status = TipStatus::kCensoredByError;
    tp.error = e.what();
    return tp;
  }

  std::vector<TestedMutant> previous_sorted;  // all passed
  std::unordered_set<std::string> seen;
  GenerationResult gen = GenerateParaphrases(seed, n, k, store, params.mutant_cap);
  const int replaceable = static_cast<int>(gen.replaceable_count);

  for (int round = 0;; ++round) {
    std::vector<TestedMutant> batch;
    std::optional<TestedMutant> alpha_star;
    try {
      for (const auto& m : gen.mutants) {
        if (!seen.insert(m.text).second) continue;
        batch.push_back(MakeTested(Score(m, metric, seed.prompt), params.rng_seed));
        tp.family_raw.push_back(batch.back().scored.raw_value);
      }
    } catch (const Error& e) {
      tp.status = TipStatus::kCensoredByError;
      tp.error = e.what();
      SetLastSuccess(tp, previous_sorted.empty()
                             ? std::nullopt
                             : std::optional<TestedMutant>(previous_sorted.back()),
                     self);
      return tp;
    }
    std::sort(batch.begin(), batch.end(), ExplorationLess);

    std::vector<TestedMutant> tested;
    bool found = false;
    for (auto& candidate : batch) {
      try {
        candidate.output = model.Query(candidate.scored.mutant.text).output_text;
        ++tp.queries_used;
        candidate.failed = Fail(oracle, tp.seed_output, candidate.output);
      } catch (const Error& e) {
        tp.status = TipStatus::kCensoredByError;
        tp.error = e.what();
        std::optional<TestedMutant> best;
        if (!previous_sorted.empty()) best = previous_sorted.back();
        if (!tested.empty() && (!best || ExplorationLess(*best, tested.back()))) {
          best = tested.back();
        }
        SetLastSuccess(tp, best, self);
        return tp;
      }
      tp.trace.push_back(ToTrace(candidate, round));
      tested.push_back(candidate);
      if (candidate.failed) {
        found = true;
        break;
      }
    }

    if (found) {
      const MergeResult merged = MergeExpansion(previous_sorted, tested);
      SetLastSuccess(tp, merged.last_success, self);
      tp.ff = merged.first_failure.scored;
      tp.ff_output = merged.first_failure.output;
      tp.status = TipStatus::kFound;
      return tp;
    }

    std::vector<TestedMutant> merged;
    merged.reserve(previous_sorted.size() + tested.size());
    std::merge(previous_sorted.begin(), previous_sorted.end(), tested.begin(),
               tested.end(), std::back_inserter(merged), ExplorationLess);
    previous_sorted = std::move(merged);

    if (tp.expansions >= params.max_expansions) {
      tp.status = TipStatus::kCensoredNoFailure;
      SetLastSuccess(tp, previous_sorted.empty()
                             ? std::nullopt
                             : std::optional<TestedMutant>(previous_sorted.back()),
                     self);
      return tp;
    }
    ++tp.expansions;
    n += params.c_n;
    k = std::max(1, std::min(k + params.c_k, std::max(replaceable, 1)));
    tp.final_n = n;
    tp.final_k = k;
    gen = GenerateParaphrases(seed, n, k, store, params.mutant_cap);
  }
}

nlohmann::json ToJson(const ScoredMutant& scored) {
  nlohmann::json j = ToJson(scored.mutant);
  j["metric"] = MetricName(scored.metric);
  j["raw_value"] = scored.raw_value;
  j["proximity_key"] = scored.proximity_key;
  return j;
}

ScoredMutant ScoredMutantFromJson(const nlohmann::json& j) {
  ScoredMutant s;
  s.mutant = MutantFromJson(j);
  s.metric = ParseMetricId(j.at("metric").get<std::string>());
  s.raw_value = j.at("raw_value").get<double>();
  s.proximity_key = j.at("proximity_key").get<double>();
  return s;
}

nlohmann::json ToJson(const TippingPoint& p) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& t : p.trace) {
    trace.push_back({{"text", t.text},
                     {"raw_value", t.raw_value},
                     {"proximity_key", t.proximity_key},
                     {"failed", t.failed},
                     {"order_k", t.order_k},
                     {"max_rank_n", t.max_rank_n},
                     {"round", t.round}});
  }
  nlohmann::json j = {{"seed_id", p.seed_id},
                      {"metric", MetricName(p.metric)},
                      {"ls", ToJson(p.ls)},
                      {"ls_is_seed", p.ls_is_seed},
                      {"ff", p.ff ? ToJson(*p.ff) : nlohmann::json(nullptr)},
                      {"seed_output", p.seed_output},
                      {"ls_output", p.ls_output},
                      {"ff_output", p.ff_output ? nlohmann::json(*p.ff_output)
                                                : nlohmann::json(nullptr)},
                      {"queries_used", p.queries_used},
                      {"expansions", p.expansions},
                      {"status", TipStatusName(p.status)},
                      {"final_n", p.final_n},
                      {"final_k", p.final_k},
                      {"trace", std::move(trace)},
                      {"family_raw", p.family_raw},
                      {"error", p.error}};
  return j;
}

TippingPoint TippingPointFromJson(const nlohmann::json& j) {
  TippingPoint p;
  p.seed_id = j.at("seed_id").get<std::string>();
  p.metric = ParseMetricId(j.at("metric").get<std::string>());
  p.ls = ScoredMutantFromJson(j.at("ls"));
  p.ls_is_seed = j.at("ls_is_seed").get<bool>();
  if (!j.at("ff").is_null()) p.ff = ScoredMutantFromJson(j.at("ff"));
  p.seed_output = j.at("seed_output").get<std::string>();
  p.ls_output = j.at("ls_output").get<std::string>();
  if (!j.at("ff_output").is_null()) p.ff_output = j.at("ff_output").get<std::string>();
  p.queries_used = j.at("queries_used").get<int>();
  p.expansions = j.at("expansions").get<int>();
  p.status = ParseTipStatus(j.at("status").get<std::string>());
  p.final_n = j.at("final_n").get<int>();
  p.final_k = j.at("final_k").get<int>();
  for (const auto& t : j.at("trace")) {
    p.trace.push_back({t.at("text").get<std::string>(),
                       t.at("raw_value").get<double>(),
                       t.at("proximity_key").get<double>(),
                       t.at("failed").get<bool>(), t.at("order_k").get<int>(),
                       t.at("max_rank_n").get<int>(), t.at("round").get<int>()});
  }
  p.family_raw = j.at("family_raw").get<std::vector<double>>();
  p.error = j.at("error").get<std::string>();
  return p;
}

}  // namespace robusta
