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

#include "robusta/embeddings.h"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>

#include "robusta/error.h"

namespace robusta {
namespace {

// Line source over plain or gzip-compressed files.
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path) {
    if (path.extension() == ".gz") {
      gz_ = gzopen(path.c_str(), "rb");
      if (gz_ == nullptr) throw ParseError("cannot open " + path.string());
      buffer_.resize(1 << 16);
    } else {
      plain_.open(path, std::ios::binary);
      if (!plain_) throw ParseError("cannot open " + path.string());
    }
  }
  ~LineReader() {
    if (gz_ != nullptr) gzclose(gz_);
  }
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  bool Next(std::string& line) {
    if (gz_ == nullptr) return static_cast<bool>(std::getline(plain_, line));
    line.clear();
    while (true) {
      char* got = gzgets(gz_, buffer_.data(), static_cast<int>(buffer_.size()));
      if (got == nullptr) return !line.empty();
      line.append(got);
      if (!line.empty() && line.back() == '\n') {
        line.pop_back();
        return true;
      }
    }
  }

 private:
  std::ifstream plain_;
  gzFile gz_ = nullptr;
  std::vector<char> buffer_;
};

}  // namespace

std::string FoldCase(std::string_view token) {
  std::string out(token);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

EmbeddingStore::EmbeddingStore(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw PreconditionError("embedding dimension must be > 0");
}

bool EmbeddingStore::Add(std::string_view token, std::span<const float> vector) {
  if (vector.size() != dimension_) {
    throw PreconditionError("vector length " + std::to_string(vector.size()) +
                            " != dimension " + std::to_string(dimension_));
  }
  std::string folded = FoldCase(token);
  if (index_.contains(folded)) return false;
  index_.emplace(folded, tokens_.size());
  tokens_.push_back(std::move(folded));
  double sq = 0.0;
  for (float v : vector) {
    values_.push_back(v);
    sq += static_cast<double>(v) * v;
  }
  norms_.push_back(std::sqrt(sq));
  return true;
}

std::span<const float> EmbeddingStore::Row(std::size_t index) const {
  return {values_.data() + index * dimension_, dimension_};
}

bool EmbeddingStore::Contains(std::string_view token) const {
  return index_.contains(FoldCase(token));
}

std::optional<std::span<const float>> EmbeddingStore::Vector(
    std::string_view token) const {
  auto it = index_.find(FoldCase(token));
  if (it == index_.end()) return std::nullopt;
  return Row(it->second);
}

std::optional<Neighborhood> EmbeddingStore::Neighbors(std::string_view word,
                                                      std::size_t n) const {
  auto it = index_.find(FoldCase(word));
  if (it == index_.end()) return std::nullopt;
  const std::size_t self = it->second;
  Neighborhood out;
  out.word = tokens_[self];
  if (n == 0 || norms_[self] == 0.0) return out;

  const auto query = Row(self);
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (i == self || norms_[i] == 0.0) continue;
    const auto row = Row(i);
    double dot = 0.0;
    for (std::size_t d = 0; d < dimension_; ++d) {
      dot += static_cast<double>(query[d]) * row[d];
    }
    double cos = dot / (norms_[self] * norms_[i]);
    scored.emplace_back(std::clamp(cos, -1.0, 1.0), i);
  }
  auto better = [this](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return tokens_[a.second] < tokens_[b.second];
  };
  const std::size_t take = std::min(n, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + take, scored.end(), better);
  for (std::size_t r = 0; r < take; ++r) {
    out.neighbors.push_back({tokens_[scored[r].second], scored[r].first,
                             static_cast<int>(r + 1)});
  }
  return out;
}

std::vector<double> EmbeddingStore::PoolSentence(
    std::span<const std::string> tokens) const {
  if (tokens.empty()) throw PreconditionError("pool_sentence: no tokens");
  std::vector<double> sum(dimension_, 0.0);
  std::size_t hits = 0;
  for (const auto& t : tokens) {
    auto it = index_.find(FoldCase(t));
    if (it == index_.end()) continue;
    const auto row = Row(it->second);
    for (std::size_t d = 0; d < dimension_; ++d) sum[d] += row[d];
    ++hits;
  }
  if (hits == 0) {
    throw PreconditionError("pool_sentence: every token is out of vocabulary");
  }
  for (double& v : sum) v /= static_cast<double>(hits);
  return sum;
}

EmbeddingStore LoadEmbeddings(const std::filesystem::path& path,
                              std::optional<std::size_t> expected_dimension) {
  LineReader reader(path);
  std::optional<EmbeddingStore> store;
  std::string line;
  std::vector<float> values;
  std::size_t line_no = 0;
  while (reader.Next(line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto space = line.find(' ');
    if (space == 0 || space == std::string::npos) {
      throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                       ": expected a token followed by values");
    }
    values.clear();
    const char* p = line.data() + space;
    const char* end = line.data() + line.size();
    while (p < end) {
      if (*p != ' ') {
        throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                         ": values must be single-space separated");
      }
      ++p;
      float v = 0.0F;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc() || next == p) {
        throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                         ": malformed value");
      }
      values.push_back(v);
      p = next;
    }
    if (!store) {
      if (expected_dimension && *expected_dimension != values.size()) {
        throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                         ": dimension " + std::to_string(values.size()) +
                         " does not match expected " +
                         std::to_string(*expected_dimension));
      }
      if (values.empty()) {
        throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                         ": no values");
      }
      store.emplace(values.size());
    }
    if (values.size() != store->dimension()) {
      throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                       ": expected " + std::to_string(store->dimension()) +
                       " values, found " + std::to_string(values.size()));
    }
    store->Add(std::string_view(line).substr(0, space), values);
  }
  if (!store) throw ParseError(path.string() + ": empty embedding file");
  return std::move(*store);
}

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw PreconditionError("cosine: length mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw PreconditionError("cosine: undefined for a zero vector");
  }
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double EuclideanDistance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw PreconditionError("euclidean: length mismatch");
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

}  // namespace robusta
