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

// Aggregation of tipping points into robustness scores, scenario slices,
// metric distinguishability and structural diffs of generated code.

#ifndef ROBUSTA_ANALYSIS_H_
#define ROBUSTA_ANALYSIS_H_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "robusta/explorer.h"
#include "robusta/seed_task.h"
#include "robusta/tree.h"

namespace robusta {

struct RobustnessSummary {
  double r_o = 0.0;     // mean FF distance
  double r_star = 0.0;  // mean LS distance
  std::size_t n_found = 0;
  std::size_t n_censored = 0;
};

// Means over found points only; censored points are counted. Throws
// PreconditionError when nothing was found.
RobustnessSummary Robustness(std::span<const TippingPoint> points);

// 2|R_o - R_star| / (R_o + R_star); unset when the sum is zero.
std::optional<double> AccuracyRatio(double r_o, double r_star);

inline constexpr std::size_t kDefaultMinSliceSize = 5;

enum class SliceKey { kTopic, kComplexity };
std::string_view SliceKeyName(SliceKey key);

struct SliceCell {
  std::size_t n_found = 0;
  std::size_t n_censored = 0;
  std::optional<double> r_o;
  std::optional<double> r_star;
  std::optional<double> accuracy_ratio;
  bool reliable = false;  // n_found >= the minimum slice size
};

// Throws PreconditionError when a point's seed is not in the dataset.
std::map<std::string, SliceCell> SliceBy(
    std::span<const TippingPoint> points, std::span<const SeedTask> dataset,
    SliceKey key, std::size_t min_slice_size = kDefaultMinSliceSize);

// Sample Pearson r. Throws on length mismatch, fewer than two pairs, or zero
// variance.
double Pearson(std::span<const double> xs, std::span<const double> ys);

// seed id -> raw distance of every mutant in that seed's family.
using DistanceFamilies = std::map<std::string, std::vector<double>>;

double Uniqueness(const DistanceFamilies& families);    // percent
double Distinctness(const DistanceFamilies& families);  // [0, 1]
// Mean |d_x - d_y| over all ordered pairs including self pairs. With
// `normalize`, distances are first min-max scaled over every family.
double Differentness(const DistanceFamilies& families, bool normalize);

struct DistinguishabilityReport {
  MetricId metric = MetricId::kLevWord;
  double uniqueness_pct = 0.0;
  double distinctness = 0.0;
  double differentness = 0.0;  // normalized
};

DistinguishabilityReport Distinguishability(MetricId metric,
                                            const DistanceFamilies& families);

struct SummaryStats {
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;  // population
  double q1 = 0.0;      // quartiles by linear interpolation
  double median = 0.0;
  double q3 = 0.0;
};

// Throws PreconditionError on an empty sample.
SummaryStats Summarize(std::span<const double> values);

struct TippingDiff {
  std::string seed_id;
  double dist_ls = 0.0;
  double dist_ff = 0.0;
  double diff = 0.0;  // dist_ff - dist_ls
};

struct TippingDiffResult {
  std::vector<TippingDiff> diffs;
  std::optional<SummaryStats> summary;
  std::vector<std::string> skipped;  // found points lacking code or reference
};

using TreeBuilder = std::function<LabeledTree(std::string_view)>;

// Tree edit distance from each seed's reference solution to the LS and FF
// outputs, over found points.
TippingDiffResult ComputeTippingDiff(
    std::span<const TippingPoint> points,
    const std::map<std::string, std::string>& reference_codes,
    const TreeBuilder& build_tree);

struct NkStats {
  std::size_t count = 0;
  double mean_n = 0.0;
  double mean_k = 0.0;
};

// Means of FF max rank and order over found points.
NkStats ComputeNkStats(std::span<const TippingPoint> points);

}  // namespace robusta

#endif  // ROBUSTA_ANALYSIS_H_
