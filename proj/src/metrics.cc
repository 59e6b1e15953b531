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

#include "robusta/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "robusta/error.h"
#include "robusta/paraphraser.h"
#include "robusta/semantic_scorer.h"

namespace robusta {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRangeTolerance = 1e-9;

const std::array<MetricDescriptor, 10> kDescriptors = {{
    {MetricId::kBleu, Orientation::kSimilarity, 1.0, 0.0, 1.0},
    {MetricId::kRougeN, Orientation::kSimilarity, 1.0, 0.0, 1.0},
    {MetricId::kRougeL, Orientation::kSimilarity, 1.0, 0.0, 1.0},
    {MetricId::kMeteor, Orientation::kSimilarity, 1.0, 0.0, 1.0},
    {MetricId::kChrf, Orientation::kSimilarity, 100.0, 0.0, 100.0},
    {MetricId::kLevChar, Orientation::kDistance, 0.0, 0.0, kInf},
    {MetricId::kLevWord, Orientation::kDistance, 0.0, 0.0, kInf},
    {MetricId::kEuclidean, Orientation::kDistance, 0.0, 0.0, kInf},
    {MetricId::kCosine, Orientation::kSimilarity, 1.0, -1.0, 1.0},
    {MetricId::kSemantic, Orientation::kSimilarity, std::nullopt, -kInf, kInf},
}};

constexpr std::array<std::string_view, 10> kNames = {
    "bleu",     "rouge_n",  "rouge_l",   "meteor", "chrf",
    "lev_char", "lev_word", "euclidean", "cosine", "semantic"};

std::vector<std::string> RequireTokens(std::string_view text,
                                       std::string_view metric) {
  auto tokens = MetricTokens(text);
  if (tokens.empty()) {
    throw PreconditionError(std::string(metric) + ": text has no tokens");
  }
  return tokens;
}

using NgramCounts = std::map<std::vector<std::string>, int>;

NgramCounts CountNgrams(const std::vector<std::string>& tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

int ClippedOverlap(const NgramCounts& cand, const NgramCounts& ref) {
  int overlap = 0;
  for (const auto& [gram, count] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(count, it->second);
  }
  return overlap;
}

double F1(double overlap, double cand_total, double ref_total) {
  if (overlap == 0.0) return 0.0;
  const double p = overlap / cand_total;
  const double r = overlap / ref_total;
  return 2.0 * p * r / (p + r);
}

// UTF-8 decode into code points; invalid bytes become their own units.
std::vector<char32_t> CodePoints(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xe ? 3 : (c >> 3) == 0x1e ? 4 : 0;
    if (len == 0 || i + len > s.size()) {
      out.push_back(c);
      ++i;
      continue;
    }
    char32_t cp = len == 1 ? c : c & (0xff >> (len + 1));
    bool ok = true;
    for (std::size_t j = 1; j < len; ++j) {
      const auto cc = static_cast<unsigned char>(s[i + j]);
      if ((cc >> 6) != 0x2) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3f);
    }
    if (!ok) {
      out.push_back(c);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

}  // namespace

const MetricDescriptor& Descriptor(MetricId id) {
  return kDescriptors[static_cast<std::size_t>(id)];
}

std::string_view MetricName(MetricId id) {
  return kNames[static_cast<std::size_t>(id)];
}

MetricId ParseMetricId(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<MetricId>(i);
  }
  throw ParseError("unknown metric '" + std::string(name) + "'");
}

const std::vector<MetricId>& LocalMetrics() {
  static const std::vector<MetricId> kLocal = {
      MetricId::kBleu,    MetricId::kRougeN,  MetricId::kRougeL,
      MetricId::kMeteor,  MetricId::kChrf,    MetricId::kLevChar,
      MetricId::kLevWord, MetricId::kEuclidean, MetricId::kCosine};
  return kLocal;
}

double ProximityKey(const MetricDescriptor& descriptor, double raw) {
  if (std::isnan(raw) || raw < descriptor.range_min - kRangeTolerance ||
      raw > descriptor.range_max + kRangeTolerance) {
    throw PreconditionError("proximity_key: value " + std::to_string(raw) +
                            " outside the range of " +
                            std::string(MetricName(descriptor.id)));
  }
  return descriptor.orientation == Orientation::kDistance ? raw : -raw;
}

std::optional<double> SelfValue(MetricId id, std::string_view text) {
  if (id != MetricId::kMeteor) return Descriptor(id).self_value;
  const double len = static_cast<double>(RequireTokens(text, "meteor").size());
  return 1.0 - 0.5 / (len * len * len);
}

std::vector<std::string> MetricTokens(std::string_view text) {
  const bool blank = std::all_of(text.begin(), text.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c));
  });
  if (blank) return {};
  try {
    return Tokenize(text).Texts();
  } catch (const PreconditionError&) {
    return {};  // only Unicode whitespace
  }
}

double Bleu(std::string_view candidate, std::string_view reference, int max_n) {
  const auto cand = RequireTokens(candidate, "bleu");
  const auto ref = RequireTokens(reference, "bleu");
  // Orders beyond the shorter text have no n-grams and are left out.
  const int orders = static_cast<int>(
      std::min<std::size_t>(max_n, std::min(cand.size(), ref.size())));
  double log_sum = 0.0;
  for (int n = 1; n <= orders; ++n) {
    const int overlap = ClippedOverlap(CountNgrams(cand, n), CountNgrams(ref, n));
    if (overlap == 0) return 0.0;
    const double total = static_cast<double>(cand.size() - n + 1);
    log_sum += std::log(overlap / total);
  }
  const double c = static_cast<double>(cand.size());
  const double r = static_cast<double>(ref.size());
  const double brevity = c > r ? 1.0 : std::exp(1.0 - r / c);
  return std::min(1.0, brevity * std::exp(log_sum / orders));
}

double RougeN(std::string_view candidate, std::string_view reference, int n) {
  const auto cand = RequireTokens(candidate, "rouge_n");
  const auto ref = RequireTokens(reference, "rouge_n");
  // Shorter texts fall back to their longest available gram length.
  n = static_cast<int>(std::min<std::size_t>(n, std::min(cand.size(), ref.size())));
  const int overlap = ClippedOverlap(CountNgrams(cand, n), CountNgrams(ref, n));
  return F1(overlap, static_cast<double>(cand.size() - n + 1),
            static_cast<double>(ref.size() - n + 1));
}

double RougeL(std::string_view candidate, std::string_view reference) {
  const auto cand = RequireTokens(candidate, "rouge_l");
  const auto ref = RequireTokens(reference, "rouge_l");
  std::vector<std::size_t> prev(ref.size() + 1, 0), cur(ref.size() + 1, 0);
  for (std::size_t i = 1; i <= cand.size(); ++i) {
    for (std::size_t j = 1; j <= ref.size(); ++j) {
      cur[j] = cand[i - 1] == ref[j - 1] ? prev[j - 1] + 1
                                         : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return F1(static_cast<double>(prev[ref.size()]),
            static_cast<double>(cand.size()), static_cast<double>(ref.size()));
}

double MeteorSimple(std::string_view candidate, std::string_view reference) {
  const auto cand = RequireTokens(candidate, "meteor");
  const auto ref = RequireTokens(reference, "meteor");
  std::map<std::string, std::vector<std::size_t>> ref_positions;
  for (std::size_t j = 0; j < ref.size(); ++j) ref_positions[ref[j]].push_back(j);
  std::vector<bool> used(ref.size(), false);

  // Greedy exact alignment: extend the current chunk when possible, otherwise
  // take the earliest unused occurrence.
  std::size_t matches = 0, chunks = 0;
  std::optional<std::size_t> prev_cand, prev_ref;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    auto it = ref_positions.find(cand[i]);
    if (it == ref_positions.end()) continue;
    std::optional<std::size_t> pick;
    for (std::size_t j : it->second) {
      if (used[j]) continue;
      if (prev_ref && j == *prev_ref + 1 && prev_cand && i == *prev_cand + 1) {
        pick = j;
        break;
      }
      if (!pick) pick = j;
    }
    if (!pick) continue;
    used[*pick] = true;
    const bool continues = prev_cand && i == *prev_cand + 1 && prev_ref &&
                           *pick == *prev_ref + 1;
    if (!continues) ++chunks;
    ++matches;
    prev_cand = i;
    prev_ref = *pick;
  }
  if (matches == 0) return 0.0;
  const double p = static_cast<double>(matches) / cand.size();
  const double r = static_cast<double>(matches) / ref.size();
  const double fmean = 10.0 * p * r / (r + 9.0 * p);
  const double frag = static_cast<double>(chunks) / matches;
  return fmean * (1.0 - 0.5 * frag * frag * frag);
}

double Chrf(std::string_view candidate, std::string_view reference, int char_n,
            double beta) {
  auto strip = [](std::string_view s) {
    std::vector<char32_t> out;
    for (char32_t c : CodePoints(s)) {
      if (!(c < 0x80 && std::isspace(static_cast<int>(c)))) out.push_back(c);
    }
    return out;
  };
  const auto cand = strip(candidate);
  const auto ref = strip(reference);
  if (cand.empty() || ref.empty()) {
    throw PreconditionError("chrf: text has no characters");
  }
  double precision_sum = 0.0, recall_sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= char_n; ++n) {
    if (cand.size() < static_cast<std::size_t>(n) ||
        ref.size() < static_cast<std::size_t>(n)) {
      break;
    }
    std::map<std::u32string, int> cand_grams, ref_grams;
    for (std::size_t i = 0; i + n <= cand.size(); ++i) {
      ++cand_grams[std::u32string(cand.begin() + i, cand.begin() + i + n)];
    }
    for (std::size_t i = 0; i + n <= ref.size(); ++i) {
      ++ref_grams[std::u32string(ref.begin() + i, ref.begin() + i + n)];
    }
    int overlap = 0;
    for (const auto& [gram, count] : cand_grams) {
      auto it = ref_grams.find(gram);
      if (it != ref_grams.end()) overlap += std::min(count, it->second);
    }
    precision_sum += static_cast<double>(overlap) / (cand.size() - n + 1);
    recall_sum += static_cast<double>(overlap) / (ref.size() - n + 1);
    ++orders;
  }
  const double p = precision_sum / orders;
  const double r = recall_sum / orders;
  if (p == 0.0 && r == 0.0) return 0.0;
  const double b2 = beta * beta;
  return 100.0 * (1.0 + b2) * p * r / (b2 * p + r);
}

std::size_t LevenshteinChar(std::string_view a, std::string_view b) {
  return EditDistance(CodePoints(a), CodePoints(b));
}

std::size_t LevenshteinWord(std::string_view a, std::string_view b) {
  return EditDistance(MetricTokens(a), MetricTokens(b));
}

double Euclidean(const EmbeddingStore& store, std::string_view a,
                 std::string_view b) {
  const auto va = store.PoolSentence(RequireTokens(a, "euclidean"));
  const auto vb = store.PoolSentence(RequireTokens(b, "euclidean"));
  return EuclideanDistance(va, vb);
}

double CosineSim(const EmbeddingStore& store, std::string_view a,
                 std::string_view b) {
  const auto va = store.PoolSentence(RequireTokens(a, "cosine"));
  const auto vb = store.PoolSentence(RequireTokens(b, "cosine"));
  return CosineSimilarity(va, vb);
}

MetricScorer::MetricScorer(MetricId id, const EmbeddingStore* store,
                           std::shared_ptr<SemanticScorer> semantic)
    : descriptor_(&Descriptor(id)), store_(store), semantic_(std::move(semantic)) {
  if ((id == MetricId::kEuclidean || id == MetricId::kCosine) && store_ == nullptr) {
    throw PreconditionError(std::string(MetricName(id)) +
                            " needs an embedding store");
  }
  if (id == MetricId::kSemantic && semantic_ == nullptr) {
    throw PreconditionError("semantic metric needs a scorer endpoint");
  }
}

double MetricScorer::Raw(std::string_view candidate,
                         std::string_view reference) const {
  switch (descriptor_->id) {
    case MetricId::kBleu: return Bleu(candidate, reference);
    case MetricId::kRougeN: return RougeN(candidate, reference);
    case MetricId::kRougeL: return RougeL(candidate, reference);
    case MetricId::kMeteor: return MeteorSimple(candidate, reference);
    case MetricId::kChrf: return Chrf(candidate, reference);
    case MetricId::kLevChar:
      return static_cast<double>(LevenshteinChar(candidate, reference));
    case MetricId::kLevWord:
      return static_cast<double>(LevenshteinWord(candidate, reference));
    case MetricId::kEuclidean: return Euclidean(*store_, candidate, reference);
    case MetricId::kCosine: return CosineSim(*store_, candidate, reference);
    case MetricId::kSemantic: return semantic_->Score(candidate, reference);
  }
  throw Error("unreachable metric id");
}

}  // namespace robusta
