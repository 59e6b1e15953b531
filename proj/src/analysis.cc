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

#include "robusta/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include "robusta/error.h"

namespace robusta {
namespace {

void RequireNonEmpty(const DistanceFamilies& families) {
  if (families.empty()) throw PreconditionError("no distance families");
  for (const auto& [seed, values] : families) {
    if (values.empty()) {
      throw PreconditionError("distance family for '" + seed + "' is empty");
    }
  }
}

// Sum over all ordered pairs of |a - b|, via the sorted-prefix identity.
double PairwiseAbsSum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double m = static_cast<double>(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i] * (2.0 * static_cast<double>(i) - m + 1.0);
  }
  return 2.0 * sum;
}

double Quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace

RobustnessSummary Robustness(std::span<const TippingPoint> points) {
  RobustnessSummary s;
  double ff_sum = 0.0, ls_sum = 0.0;
  for (const auto& p : points) {
    if (p.status != TipStatus::kFound) {
      ++s.n_censored;
      continue;
    }
    ff_sum += p.ff->raw_value;
    ls_sum += p.ls.raw_value;
    ++s.n_found;
  }
  if (s.n_found == 0) {
    throw PreconditionError("robustness: no found tipping points (" +
                            std::to_string(s.n_censored) + " censored)");
  }
  s.r_o = ff_sum / static_cast<double>(s.n_found);
  s.r_star = ls_sum / static_cast<double>(s.n_found);
  return s;
}

std::optional<double> AccuracyRatio(double r_o, double r_star) {
  if (r_o + r_star == 0.0) return std::nullopt;
  return 2.0 * std::fabs(r_o - r_star) / (r_o + r_star);
}

std::string_view SliceKeyName(SliceKey key) {
  return key == SliceKey::kTopic ? "topic" : "complexity";
}

std::map<std::string, SliceCell> SliceBy(std::span<const TippingPoint> points,
                                         std::span<const SeedTask> dataset,
                                         SliceKey key,
                                         std::size_t min_slice_size) {
  std::unordered_map<std::string, const SeedTask*> by_id;
  for (const auto& s : dataset) by_id[s.id] = &s;
  std::map<std::string, std::vector<TippingPoint>> groups;
  for (const auto& p : points) {
    auto it = by_id.find(p.seed_id);
    if (it == by_id.end()) {
      throw PreconditionError("slice_by: seed '" + p.seed_id +
                              "' is not in the dataset");
    }
    const std::string label = key == SliceKey::kTopic
                                  ? it->second->topic
                                  : std::to_string(it->second->complexity);
    groups[label].push_back(p);
  }
  std::map<std::string, SliceCell> cells;
  for (const auto& [label, group] : groups) {
    SliceCell cell;
    for (const auto& p : group) {
      if (p.status != TipStatus::kFound) ++cell.n_censored;
    }
    cell.n_found = group.size() - cell.n_censored;
    if (cell.n_found > 0) {
      const auto r = Robustness(group);
      cell.r_o = r.r_o;
      cell.r_star = r.r_star;
      cell.accuracy_ratio = AccuracyRatio(r.r_o, r.r_star);
    }
    cell.reliable = cell.n_found >= min_slice_size;
    cells.emplace(label, std::move(cell));
  }
  return cells;
}

double Pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw PreconditionError("pearson: length mismatch");
  if (xs.size() < 2) throw PreconditionError("pearson: need at least two pairs");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw PreconditionError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double Uniqueness(const DistanceFamilies& families) {
  RequireNonEmpty(families);
  double total = 0.0;
  for (const auto& [seed, values] : families) {
    std::map<double, std::size_t> counts;
    for (double v : values) ++counts[v];
    std::size_t unique = 0;
    for (const auto& [v, c] : counts) {
      if (c == 1) ++unique;
    }
    total += static_cast<double>(unique) / static_cast<double>(values.size());
  }
  return 100.0 * total / static_cast<double>(families.size());
}

double Distinctness(const DistanceFamilies& families) {
  RequireNonEmpty(families);
  double total = 0.0;
  for (const auto& [seed, values] : families) {
    const std::set<double> distinct(values.begin(), values.end());
    total += static_cast<double>(distinct.size()) / static_cast<double>(values.size());
  }
  return total / static_cast<double>(families.size());
}

double Differentness(const DistanceFamilies& families, bool normalize) {
  RequireNonEmpty(families);
  double lo = 0.0, range = 1.0;
  if (normalize) {
    lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& [seed, values] : families) {
      for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    range = hi - lo;
  }
  double total = 0.0;
  for (const auto& [seed, values] : families) {
    if (normalize && range == 0.0) continue;  // every distance maps to 0
    std::vector<double> scaled(values);
    for (double& v : scaled) v = (v - lo) / range;
    const double m = static_cast<double>(values.size());
    total += PairwiseAbsSum(std::move(scaled)) / (m * m);
  }
  return total / static_cast<double>(families.size());
}

DistinguishabilityReport Distinguishability(MetricId metric,
                                            const DistanceFamilies& families) {
  return {metric, Uniqueness(families), Distinctness(families),
          Differentness(families, true)};
}

SummaryStats Summarize(std::span<const double> values) {
  if (values.empty()) throw PreconditionError("summarize: empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  SummaryStats s;
  s.count = sorted.size();
  double sum = 0.0;
  for (double v : sorted) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  double sq = 0.0;
  for (double v : sorted) sq += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(s.count));
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = Quantile(sorted, 0.25);
  s.median = Quantile(sorted, 0.5);
  s.q3 = Quantile(sorted, 0.75);
  return s;
}

TippingDiffResult ComputeTippingDiff(
    std::span<const TippingPoint> points,
    const std::map<std::string, std::string>& reference_codes,
    const TreeBuilder& build_tree) {
  TippingDiffResult result;
  std::vector<double> diffs;
  for (const auto& p : points) {
    if (p.status != TipStatus::kFound) continue;
    auto ref = reference_codes.find(p.seed_id);
    if (ref == reference_codes.end() || !p.ff_output) {
      result.skipped.push_back(p.seed_id);
      continue;
    }
    const LabeledTree ref_tree = build_tree(ref->second);
    TippingDiff d;
    d.seed_id = p.seed_id;
    d.dist_ls = static_cast<double>(TreeEditDistance(ref_tree, build_tree(p.ls_output)));
    d.dist_ff = static_cast<double>(TreeEditDistance(ref_tree, build_tree(*p.ff_output)));
    d.diff = d.dist_ff - d.dist_ls;
    diffs.push_back(d.diff);
    result.diffs.push_back(std::move(d));
  }
  if (!diffs.empty()) result.summary = Summarize(diffs);
  return result;
}

NkStats ComputeNkStats(std::span<const TippingPoint> points) {
  NkStats s;
  double n_sum = 0.0, k_sum = 0.0;
  for (const auto& p : points) {
    if (p.status != TipStatus::kFound) continue;
    n_sum += p.ff->mutant.max_rank_n;
    k_sum += p.ff->mutant.order_k;
    ++s.count;
  }
  if (s.count > 0) {
    s.mean_n = n_sum / static_cast<double>(s.count);
    s.mean_k = k_sum / static_cast<double>(s.count);
  }
  return s;
}

}  // namespace robusta
