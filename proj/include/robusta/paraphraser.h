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

// Tokenization and ReplaceWord paraphrase generation.

#ifndef ROBUSTA_PARAPHRASER_H_
#define ROBUSTA_PARAPHRASER_H_

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "robusta/embeddings.h"
#include "robusta/seed_task.h"

namespace robusta {

struct Token {
  std::string text;
  bool replaceable = false;  // purely ASCII-alphabetic
  std::size_t begin = 0;     // byte span in the surface text
  std::size_t end = 0;
};

struct TokenizedText {
  std::string surface;
  std::vector<Token> tokens;

  // L(x): number of replaceable tokens.
  std::size_t ReplaceableCount() const;
  std::vector<std::string> Texts() const;
};

// Splits on Unicode whitespace, then peels leading and trailing punctuation
// off each chunk into separate tokens. Throws PreconditionError on blank text.
TokenizedText Tokenize(std::string_view text);

bool IsAlphabetic(std::string_view token);

struct Replacement {
  std::size_t position = 0;  // token index
  std::string original;
  std::string substitute;
  int rank = 0;

  friend bool operator==(const Replacement&, const Replacement&) = default;
};

struct Mutant {
  std::string seed_id;
  std::string text;
  std::vector<Replacement> replacements;  // ascending by position
  int order_k = 0;
  int max_rank_n = 0;

  friend bool operator==(const Mutant&, const Mutant&) = default;
};

// x[w/w']: first-order mutant of `seed`.
Mutant ReplaceWord(const TokenizedText& seed, std::string_view seed_id,
                   std::size_t position, std::string_view substitute, int rank);

// Applies one more replacement to `base`, a mutant of `seed`. The position
// must not already be replaced.
Mutant ReplaceWord(const TokenizedText& seed, const Mutant& base,
                   std::size_t position, std::string_view substitute, int rank);

inline constexpr std::size_t kDefaultMutantCap = 5000;
inline constexpr std::size_t kUnboundedCap =
    std::numeric_limits<std::size_t>::max();

struct GenerationResult {
  TokenizedText seed;
  // Priority order: lower order, then lower max rank, then text.
  std::vector<Mutant> mutants;
  std::size_t replaceable_count = 0;  // L(seed)
  std::size_t oov_sites = 0;
  bool truncated = false;  // a candidate was dropped because of the cap
  std::vector<std::string> diagnostics;
};

// All mutants of order 1..min(k, L) using neighbours of rank <= n, deduped by
// surface text and truncated to `cap`.
GenerationResult GenerateParaphrases(const SeedTask& seed, int n, int k,
                                     const EmbeddingStore& store,
                                     std::size_t cap = kDefaultMutantCap);

nlohmann::json ToJson(const Mutant& mutant);
Mutant MutantFromJson(const nlohmann::json& j);

}  // namespace robusta

#endif  // ROBUSTA_PARAPHRASER_H_
