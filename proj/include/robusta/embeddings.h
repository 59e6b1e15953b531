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

// Word-vector store backed by GloVe-format text files.

#ifndef ROBUSTA_EMBEDDINGS_H_
#define ROBUSTA_EMBEDDINGS_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace robusta {

// ASCII case folding used for every store lookup.
std::string FoldCase(std::string_view token);

struct Neighbor {
  std::string token;
  double cosine_similarity = 0.0;
  int rank = 0;  // 1-based
};

struct Neighborhood {
  std::string word;
  std::vector<Neighbor> neighbors;
};

// Immutable after construction; safe for concurrent readers.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::size_t dimension);

  // Returns false (and keeps the existing entry) when the folded token is
  // already present.
  bool Add(std::string_view token, std::span<const float> vector);

  std::size_t dimension() const { return dimension_; }
  std::size_t vocabulary_size() const { return tokens_.size(); }

  bool Contains(std::string_view token) const;
  // Null when the token is out of vocabulary.
  std::optional<std::span<const float>> Vector(std::string_view token) const;

  const std::vector<std::string>& tokens() const { return tokens_; }

  // Top-n neighbours of `word` by cosine similarity. Sorted by descending
  // similarity, ties by ascending token. Zero vectors are never candidates.
  // Null when `word` is out of vocabulary.
  std::optional<Neighborhood> Neighbors(std::string_view word,
                                        std::size_t n) const;

  // Mean of the in-vocabulary token vectors. Throws PreconditionError when
  // `tokens` is empty or entirely out of vocabulary.
  std::vector<double> PoolSentence(std::span<const std::string> tokens) const;

 private:
  std::span<const float> Row(std::size_t index) const;

  std::size_t dimension_;
  std::vector<std::string> tokens_;
  std::vector<float> values_;  // row-major, vocabulary_size x dimension
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Parses `token v1 ... vd` lines. Paths ending in ".gz" are read through
// zlib. Dimension comes from the first line unless `expected_dimension` is
// set. Throws ParseError naming the offending line.
EmbeddingStore LoadEmbeddings(const std::filesystem::path& path,
                              std::optional<std::size_t> expected_dimension =
                                  std::nullopt);

double CosineSimilarity(std::span<const double> a, std::span<const double> b);
double EuclideanDistance(std::span<const double> a, std::span<const double> b);

}  // namespace robusta

#endif  // ROBUSTA_EMBEDDINGS_H_
