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

// Text distance and similarity metrics, and the proximity ordering that lets
// the explorer sort any of them the same way.

#ifndef ROBUSTA_METRICS_H_
#define ROBUSTA_METRICS_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robusta/embeddings.h"

namespace robusta {

class SemanticScorer;

enum class MetricId {
  kBleu,
  kRougeN,
  kRougeL,
  kMeteor,
  kChrf,
  kLevChar,
  kLevWord,
  kEuclidean,
  kCosine,
  kSemantic,
};

enum class Orientation { kSimilarity, kDistance };

struct MetricDescriptor {
  MetricId id;
  Orientation orientation;
  // Value of metric(t, t). Unset for the remote scorer, whose scale is
  // whatever the endpoint returns.
  std::optional<double> self_value;
  double range_min;
  double range_max;  // infinity for unbounded distances
};

const MetricDescriptor& Descriptor(MetricId id);
std::string_view MetricName(MetricId id);
// Throws ParseError on unknown names.
MetricId ParseMetricId(std::string_view name);
// The nine metrics computed in-process.
const std::vector<MetricId>& LocalMetrics();

// Orientation-normalized ordering value: smaller means closer to the seed.
// Throws PreconditionError when `raw` is outside the declared range.
double ProximityKey(const MetricDescriptor& descriptor, double raw);

// metric(t, t). The descriptor value for every metric except METEOR, whose
// fragmentation penalty leaves 1 - 0.5 / len^3 for a single full chunk. Unset
// for the remote scorer.
std::optional<double> SelfValue(MetricId id, std::string_view text);

// Whitespace/punctuation tokens as produced by Tokenize; empty for blank text.
std::vector<std::string> MetricTokens(std::string_view text);

// Unsmoothed; any order with zero overlap gives 0. Gram orders are capped at
// the shorter text's length, as for ROUGE-N and chrF.
double Bleu(std::string_view candidate, std::string_view reference,
            int max_n = 4);
double RougeN(std::string_view candidate, std::string_view reference,
              int n = 2);
double RougeL(std::string_view candidate, std::string_view reference);
double MeteorSimple(std::string_view candidate, std::string_view reference);
double Chrf(std::string_view candidate, std::string_view reference,
            int char_n = 6, double beta = 2.0);
std::size_t LevenshteinChar(std::string_view a, std::string_view b);
std::size_t LevenshteinWord(std::string_view a, std::string_view b);
double Euclidean(const EmbeddingStore& store, std::string_view a,
                 std::string_view b);
double CosineSim(const EmbeddingStore& store, std::string_view a,
                 std::string_view b);

// Generic edit distance over any sequence of comparable units.
template <typename Seq>
std::size_t EditDistance(const Seq& a, const Seq& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Evaluates one metric as a distance from a candidate text (the mutant) to a
// reference text (the seed). Holds the embedding store or remote scorer the
// metric needs.
class MetricScorer {
 public:
  MetricScorer(MetricId id, const EmbeddingStore* store = nullptr,
               std::shared_ptr<SemanticScorer> semantic = nullptr);

  const MetricDescriptor& descriptor() const { return *descriptor_; }
  MetricId id() const { return descriptor_->id; }

  double Raw(std::string_view candidate, std::string_view reference) const;
  double Key(double raw) const { return ProximityKey(*descriptor_, raw); }

 private:
  const MetricDescriptor* descriptor_;
  const EmbeddingStore* store_;
  std::shared_ptr<SemanticScorer> semantic_;
};

}  // namespace robusta

#endif  // ROBUSTA_METRICS_H_
