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

// Tipping-point search: test mutants outward from the seed in proximity
// order until the first failure, expanding the mutant set when none fails.

#ifndef ROBUSTA_EXPLORER_H_
#define ROBUSTA_EXPLORER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "robusta/embeddings.h"
#include "robusta/metrics.h"
#include "robusta/oracles.h"
#include "robusta/paraphraser.h"
#include "robusta/seed_task.h"
#include "robusta/subjects.h"

namespace robusta {

struct ExplorationParams {
  int n = 5;  // initial neighbour rank
  int k = 5;  // initial mutant order
  int c_n = 1;
  int c_k = 1;
  int max_expansions = 3;
  std::uint64_t rng_seed = 0;
  std::size_t mutant_cap = kDefaultMutantCap;
};

// Throws PreconditionError when the parameters are out of range.
void Validate(const ExplorationParams& params);

struct ScoredMutant {
  Mutant mutant;
  MetricId metric = MetricId::kLevWord;
  double raw_value = 0.0;
  double proximity_key = 0.0;
};

ScoredMutant Score(const Mutant& mutant, const MetricScorer& scorer,
                   std::string_view seed_prompt);

// Deterministic per-mutant tie-break drawn from rng_seed || seed_id || text.
// Sorting by (key, tie-break) permutes each equal-key group, and any subset
// keeps the relative order it has in the full set.
std::uint64_t TieBreak(std::uint64_t rng_seed, std::string_view seed_id,
                       std::string_view text);

// Ascending proximity key, ties permuted deterministically. Throws
// PreconditionError when the mutants were scored with different metrics.
std::vector<ScoredMutant> SortMutants(std::vector<ScoredMutant> scored,
                                      std::uint64_t rng_seed);

struct TestedMutant {
  ScoredMutant scored;
  std::uint64_t tie_break = 0;
  bool failed = false;
  std::string output;
};

// Strict total order used for testing: (key, tie-break, text).
bool ExplorationLess(const TestedMutant& a, const TestedMutant& b);

struct MergeResult {
  std::optional<TestedMutant> last_success;  // unset: the seed itself
  TestedMutant first_failure;
};

// Combines an earlier all-passing round with a new round that ended in a
// failure, without re-querying. `previous_sorted` must be in
// ExplorationLess order and `new_results` in tested order.
MergeResult MergeExpansion(const std::vector<TestedMutant>& previous_sorted,
                           const std::vector<TestedMutant>& new_results);

enum class TipStatus { kFound, kCensoredNoFailure, kCensoredByError };

std::string_view TipStatusName(TipStatus status);
TipStatus ParseTipStatus(std::string_view name);

struct TraceEntry {
  std::string text;
  double raw_value = 0.0;
  double proximity_key = 0.0;
  bool failed = false;
  int order_k = 0;
  int max_rank_n = 0;
  int round = 0;
};

struct TippingPoint {
  std::string seed_id;
  MetricId metric = MetricId::kLevWord;
  // Last success. When `ls_is_seed` it is the seed with raw = metric(t, t).
  ScoredMutant ls;
  bool ls_is_seed = true;
  std::optional<ScoredMutant> ff;
  std::string seed_output;
  std::string ls_output;
  std::optional<std::string> ff_output;
  int queries_used = 0;
  int expansions = 0;
  TipStatus status = TipStatus::kCensoredNoFailure;
  int final_n = 0;
  int final_k = 0;
  std::vector<TraceEntry> trace;   // tested prefix, in test order
  std::vector<double> family_raw;  // raw distance of every generated mutant
  std::string error;
};

TippingPoint ExploreSeed(const SeedTask& seed, const ModelHandle& model,
                         const MetricScorer& metric, const OracleSpec& oracle,
                         const EmbeddingStore& store,
                         const ExplorationParams& params);

nlohmann::json ToJson(const ScoredMutant& scored);
ScoredMutant ScoredMutantFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const TippingPoint& point);
TippingPoint TippingPointFromJson(const nlohmann::json& j);

}  // namespace robusta

#endif  // ROBUSTA_EXPLORER_H_
