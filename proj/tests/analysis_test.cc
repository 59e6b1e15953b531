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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "robusta/analysis.h"
#include "robusta/error.h"

namespace robusta {
namespace {

TippingPoint Found(const std::string& id, double ls_raw, double ff_raw, int n = 1,
                   int k = 1) {
  TippingPoint p;
  p.seed_id = id;
  p.metric = MetricId::kLevWord;
  p.status = TipStatus::kFound;
  p.ls.raw_value = ls_raw;
  p.ls.proximity_key = ls_raw;
  p.ls_is_seed = false;
  ScoredMutant ff;
  ff.raw_value = ff_raw;
  ff.proximity_key = ff_raw;
  ff.mutant.max_rank_n = n;
  ff.mutant.order_k = k;
  p.ff = ff;
  return p;
}

TippingPoint Censored(const std::string& id) {
  TippingPoint p;
  p.seed_id = id;
  p.status = TipStatus::kCensoredNoFailure;
  p.ls.raw_value = 100.0;
  return p;
}

TEST(RobustnessTest, SinglePoint) {
  const std::vector<TippingPoint> pts = {Found("a", 0.46, 0.42)};
  const auto r = Robustness(pts);
  EXPECT_EQ(r.r_o, 0.42);
  EXPECT_EQ(r.r_star, 0.46);
  EXPECT_EQ(r.n_found, 1u);
}

TEST(RobustnessTest, CensoredExcludedAndCounted) {
  const std::vector<TippingPoint> pts = {Found("a", 1, 2), Censored("b"), Found("c", 3, 4)};
  const auto r = Robustness(pts);
  EXPECT_EQ(r.r_o, 3.0);
  EXPECT_EQ(r.r_star, 2.0);
  EXPECT_EQ(r.n_censored, 1u);
  const std::vector<TippingPoint> none = {Censored("b")};
  try {
    Robustness(none);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("1 censored"), std::string::npos);
  }
}

TEST(RobustnessTest, FiftyPointsMatchIndependentSumAndPermutation) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 10);
  std::vector<TippingPoint> pts;
  std::vector<double> ls, ff;
  for (int i = 0; i < 50; ++i) {
    const double a = u(rng), b = a + u(rng);
    pts.push_back(Found("s" + std::to_string(i), a, b));
    ls.push_back(a);
    ff.push_back(b);
  }
  // Reverse-order Kahan sums as the oracle.
  auto kahan = [](std::vector<double> v) {
    std::reverse(v.begin(), v.end());
    double s = 0, c = 0;
    for (double x : v) {
      const double y = x - c, t = s + y;
      c = (t - s) - y;
      s = t;
    }
    return s / v.size();
  };
  const auto r = Robustness(pts);
  EXPECT_NEAR(r.r_o, kahan(ff), 1e-12);
  EXPECT_NEAR(r.r_star, kahan(ls), 1e-12);
  std::shuffle(pts.begin(), pts.end(), rng);
  const auto r2 = Robustness(pts);
  EXPECT_NEAR(r2.r_o, r.r_o, 1e-12);
  EXPECT_GE(r.r_o, *std::min_element(ff.begin(), ff.end()));
  EXPECT_LE(r.r_o, *std::max_element(ff.begin(), ff.end()));
}

TEST(AccuracyRatioTest, KnownRatios) {
  EXPECT_NEAR(*AccuracyRatio(1.0365, 1.1117), 0.0700, 1e-4);
  EXPECT_NEAR(*AccuracyRatio(0.5307, 0.4991), 0.0614, 1e-4);
  EXPECT_NEAR(*AccuracyRatio(0.4273, 0.4565), 0.0661, 1e-4);
  EXPECT_FALSE(AccuracyRatio(0.0, 0.0));
}

std::vector<SeedTask> Dataset(const std::vector<std::tuple<std::string, std::string, int>>& rows) {
  std::vector<SeedTask> out;
  for (const auto& [id, topic, cx] : rows) {
    SeedTask s;
    s.id = id;
    s.prompt = "p";
    s.topic = topic;
    s.complexity = cx;
    out.push_back(s);
  }
  return out;
}

TEST(SliceTest, SingleTopicEqualsGlobal) {
  const auto ds = Dataset({{"a", "T", 1}, {"b", "T", 2}, {"c", "T", 3}});
  const std::vector<TippingPoint> pts = {Found("a", 1, 2), Found("b", 2, 5), Censored("c")};
  const auto cells = SliceBy(pts, ds, SliceKey::kTopic);
  ASSERT_EQ(cells.size(), 1u);
  const auto global = Robustness(pts);
  const auto& c = cells.at("T");
  EXPECT_EQ(*c.r_o, global.r_o);
  EXPECT_EQ(*c.r_star, global.r_star);
  EXPECT_EQ(c.n_found, 2u);
  EXPECT_EQ(c.n_censored, 1u);
  EXPECT_FALSE(c.reliable);
}

TEST(SliceTest, ComplexityCellsHandMeans) {
  const auto ds = Dataset({{"a", "T", 1}, {"b", "T", 1}, {"c", "U", 4}, {"d", "U", 4}});
  const std::vector<TippingPoint> pts = {Found("a", 1, 2), Found("b", 3, 4),
                                          Found("c", 10, 20), Found("d", 30, 40)};
  const auto cells = SliceBy(pts, ds, SliceKey::kComplexity, 2);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(*cells.at("1").r_o, 3.0);
  EXPECT_EQ(*cells.at("1").r_star, 2.0);
  EXPECT_EQ(*cells.at("4").r_o, 30.0);
  EXPECT_EQ(*cells.at("4").r_star, 20.0);
  EXPECT_TRUE(cells.at("4").reliable);
}

TEST(SliceTest, SixTopicLabels) {
  const std::vector<std::string> topics = {"Array", "String", "OOP", "Regular Expression",
                                           "Multi-threading", "DS"};
  std::vector<std::tuple<std::string, std::string, int>> rows;
  std::vector<TippingPoint> pts;
  for (std::size_t i = 0; i < 12; ++i) {
    rows.emplace_back("s" + std::to_string(i), topics[i % 6], 1);
    pts.push_back(Found("s" + std::to_string(i), 1, 2));
  }
  const auto cells = SliceBy(pts, Dataset(rows), SliceKey::kTopic);
  ASSERT_EQ(cells.size(), 6u);
  for (const auto& t : topics) EXPECT_TRUE(cells.contains(t));
}

TEST(SliceTest, UnknownSeedThrows) {
  const auto ds = Dataset({{"a", "T", 1}});
  const std::vector<TippingPoint> pts = {Found("zz", 1, 2)};
  EXPECT_THROW(SliceBy(pts, ds, SliceKey::kTopic), PreconditionError);
}

TEST(PearsonTest, Fixtures) {
  const std::vector<double> xs = {1, 2, 3, 4, 5};
  std::vector<double> ys, neg;
  for (double x : xs) {
    ys.push_back(2 * x + 1);
    neg.push_back(-x);
  }
  EXPECT_NEAR(Pearson(xs, ys), 1.0, 1e-12);
  EXPECT_NEAR(Pearson(xs, neg), -1.0, 1e-12);
  const std::vector<double> flat = {1, 1, 1, 1, 1};
  EXPECT_THROW(Pearson(xs, flat), PreconditionError);
  EXPECT_THROW(Pearson(std::vector<double>{1}, std::vector<double>{1}), PreconditionError);
  EXPECT_THROW(Pearson(xs, std::vector<double>{1, 2}), PreconditionError);
}

TEST(PearsonTest, MatchesTwoPassOracle) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> xs(20), ys(20);
    for (int i = 0; i < 20; ++i) {
      xs[i] = g(rng);
      ys[i] = 0.5 * xs[i] + g(rng);
    }
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / 20;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / 20;
    double sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < 20; ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
      syy += (ys[i] - my) * (ys[i] - my);
    }
    EXPECT_NEAR(Pearson(xs, ys), sxy / std::sqrt(sxx * syy), 1e-12);
  }
}

TEST(DistinguishabilityTest, HandFixtures) {
  EXPECT_DOUBLE_EQ(Uniqueness({{"s", {1, 1, 2, 3}}}), 50.0);
  EXPECT_DOUBLE_EQ(Distinctness({{"s", {1, 1, 2, 3}}}), 0.75);
  EXPECT_DOUBLE_EQ(Distinctness({{"s", {1, 1, 2}}}), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(Differentness({{"s", {0, 1}}}, false), 0.5);
  EXPECT_DOUBLE_EQ(Differentness({{"s", {7}}}, false), 0.0);
  EXPECT_DOUBLE_EQ(Differentness({{"s", {3, 3, 3}}}, true), 0.0);
  EXPECT_DOUBLE_EQ(Uniqueness({{"s", {1, 2, 3}}, {"t", {4, 5}}}), 100.0);
  EXPECT_DOUBLE_EQ(Distinctness({{"s", {2, 2, 2, 2}}}), 0.25);
}

TEST(DistinguishabilityTest, NormalizationUsesGlobalRange) {
  // Global range [0, 10]: normalised {0, 0.1} and {0.5, 1}.
  const DistanceFamilies fam = {{"a", {0, 1}}, {"b", {5, 10}}};
  EXPECT_DOUBLE_EQ(Differentness(fam, false), (0.5 + 2.5) / 2);
  EXPECT_NEAR(Differentness(fam, true), (0.05 + 0.25) / 2, 1e-12);
}

TEST(DistinguishabilityTest, UniqueHundredIffDistinctOne) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> fam(1 + rng() % 6);
    for (auto& d : fam) d = static_cast<double>(rng() % 5);
    const DistanceFamilies f = {{"s", fam}};
    EXPECT_EQ(Uniqueness(f) == 100.0, Distinctness(f) == 1.0);
    const auto r = Distinguishability(MetricId::kLevWord, f);
    EXPECT_GE(r.differentness, 0.0);
    EXPECT_LE(r.differentness, 1.0);
    EXPECT_GE(r.uniqueness_pct, 0.0);
    EXPECT_LE(r.uniqueness_pct, 100.0);
  }
}

TEST(SummarizeTest, MatchesIndependentStatistics) {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> u(-5, 9);
  std::vector<double> v(10);
  for (auto& x : v) x = u(rng);
  const auto s = Summarize(v);
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / 10;
  double var = 0;
  for (double x : v) var += (x - mean) * (x - mean);
  auto quantile = [&](double q) {
    const double h = (sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
  };
  EXPECT_EQ(s.count, 10u);
  EXPECT_NEAR(s.mean, mean, 1e-12);
  EXPECT_NEAR(s.stddev, std::sqrt(var / 10), 1e-12);
  EXPECT_EQ(s.min, sorted.front());
  EXPECT_EQ(s.max, sorted.back());
  EXPECT_NEAR(s.q1, quantile(0.25), 1e-12);
  EXPECT_NEAR(s.median, quantile(0.5), 1e-12);
  EXPECT_NEAR(s.q3, quantile(0.75), 1e-12);
  EXPECT_THROW(Summarize(std::vector<double>{}), PreconditionError);
}

TEST(TippingDiffTest, SignLogicAndSkips) {
  const TreeBuilder builder = [](std::string_view code) { return BracketTree(code).tree; };
  std::vector<TippingPoint> pts;
  auto p = Found("same", 1, 2);
  p.ls_output = "f(x)";
  p.ff_output = "f(x)";
  pts.push_back(p);
  auto q = Found("neg", 1, 2);
  q.ls_output = "g(y, z)";
  q.ff_output = "f(x)";
  pts.push_back(q);
  auto r = Found("noref", 1, 2);
  r.ff_output = "x";
  pts.push_back(r);
  pts.push_back(Censored("cens"));
  const std::map<std::string, std::string> refs = {{"same", "f(y)"}, {"neg", "f(x)"}};
  const auto res = ComputeTippingDiff(pts, refs, builder);
  ASSERT_EQ(res.diffs.size(), 2u);
  EXPECT_EQ(res.diffs[0].diff, 0.0);
  EXPECT_LT(res.diffs[1].diff, 0.0);
  EXPECT_EQ(res.diffs[1].dist_ff, 0.0);
  EXPECT_EQ(res.skipped, (std::vector<std::string>{"noref"}));
  ASSERT_TRUE(res.summary);
  EXPECT_EQ(res.summary->count, 2u);
}

TEST(TippingDiffTest, SummaryOverTenTriples) {
  const TreeBuilder builder = [](std::string_view code) { return BracketTree(code).tree; };
  std::vector<TippingPoint> pts;
  std::map<std::string, std::string> refs;
  std::vector<double> expected;
  for (int i = 0; i < 10; ++i) {
    const std::string id = "s" + std::to_string(i);
    auto p = Found(id, 1, 2);
    p.ls_output = std::string(i % 3, 'a') + "(b)";
    p.ff_output = "(" + std::string(i % 4 + 1, 'c') + ")";
    refs[id] = "a(b)";
    const auto ref = builder(refs[id]);
    expected.push_back(static_cast<double>(TreeEditDistance(ref, builder(*p.ff_output))) -
                       static_cast<double>(TreeEditDistance(ref, builder(p.ls_output))));
    pts.push_back(p);
  }
  const auto res = ComputeTippingDiff(pts, refs, builder);
  const auto s = Summarize(expected);
  ASSERT_TRUE(res.summary);
  EXPECT_EQ(res.summary->mean, s.mean);
  EXPECT_EQ(res.summary->median, s.median);
  EXPECT_EQ(res.summary->stddev, s.stddev);
}

TEST(NkStatsTest, Means) {
  const std::vector<TippingPoint> one = {Found("a", 1, 2, 3, 2)};
  const auto s1 = ComputeNkStats(one);
  EXPECT_EQ(s1.mean_n, 3.0);
  EXPECT_EQ(s1.mean_k, 2.0);
  const std::vector<TippingPoint> five = {Found("a", 0, 1, 1, 1), Found("b", 0, 1, 2, 1),
                                          Found("c", 0, 1, 3, 2), Found("d", 0, 1, 4, 2),
                                          Found("e", 0, 1, 5, 4), Censored("f")};
  const auto s5 = ComputeNkStats(five);
  EXPECT_EQ(s5.count, 5u);
  EXPECT_DOUBLE_EQ(s5.mean_n, 3.0);
  EXPECT_DOUBLE_EQ(s5.mean_k, 2.0);
}

}  // namespace
}  // namespace robusta
