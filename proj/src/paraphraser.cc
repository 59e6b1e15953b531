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

#include "robusta/paraphraser.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <unordered_set>

#include "robusta/error.h"

namespace robusta {
namespace {

// Byte length of the whitespace code point at `pos`, or 0.
std::size_t WhitespaceLength(std::string_view s, std::size_t pos) {
  const auto c = static_cast<unsigned char>(s[pos]);
  if (c == ' ' || (c >= 0x09 && c <= 0x0d)) return 1;
  auto at = [&](std::size_t i) -> unsigned {
    return pos + i < s.size() ? static_cast<unsigned char>(s[pos + i]) : 0U;
  };
  if (c == 0xc2 && (at(1) == 0x85 || at(1) == 0xa0)) return 2;
  if (c == 0xe1 && at(1) == 0x9a && at(2) == 0x80) return 3;
  if (c == 0xe2 && at(1) == 0x80 &&
      (at(2) <= 0x8a || at(2) == 0xa8 || at(2) == 0xa9 || at(2) == 0xaf)) {
    return 3;
  }
  if (c == 0xe2 && at(1) == 0x81 && at(2) == 0x9f) return 3;
  if (c == 0xe3 && at(1) == 0x80 && at(2) == 0x80) return 3;
  return 0;
}

bool IsPunct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && !std::isalnum(u) && !std::isspace(u);
}

void PushToken(TokenizedText& out, std::size_t begin, std::size_t end) {
  Token t;
  t.text = out.surface.substr(begin, end - begin);
  t.replaceable = IsAlphabetic(t.text);
  t.begin = begin;
  t.end = end;
  out.tokens.push_back(std::move(t));
}

void SplitChunk(TokenizedText& out, std::size_t begin, std::size_t end) {
  const std::string& s = out.surface;
  std::size_t lead = begin;
  while (lead < end && IsPunct(s[lead])) ++lead;
  if (lead == end) {  // all punctuation, e.g. "+="
    PushToken(out, begin, end);
    return;
  }
  std::size_t trail = end;
  while (trail > lead && IsPunct(s[trail - 1])) --trail;
  if (lead > begin) PushToken(out, begin, lead);
  PushToken(out, lead, trail);
  if (trail < end) PushToken(out, trail, end);
}

std::string Splice(const TokenizedText& seed,
                   const std::vector<Replacement>& sorted_replacements) {
  std::string out;
  out.reserve(seed.surface.size() + 16);
  std::size_t cursor = 0;
  for (const auto& r : sorted_replacements) {
    const Token& t = seed.tokens[r.position];
    out.append(seed.surface, cursor, t.begin - cursor);
    out.append(r.substitute);
    cursor = t.end;
  }
  out.append(seed.surface, cursor, std::string::npos);
  return out;
}

Mutant Apply(const TokenizedText& seed, std::string_view seed_id,
             std::vector<Replacement> replacements, std::size_t position,
             std::string_view substitute, int rank) {
  if (position >= seed.tokens.size()) {
    throw PreconditionError("replace_word: position " +
                            std::to_string(position) + " out of range");
  }
  const Token& token = seed.tokens[position];
  if (!token.replaceable) {
    throw PreconditionError("replace_word: token '" + token.text +
                            "' at position " + std::to_string(position) +
                            " is not replaceable");
  }
  if (rank < 1) throw PreconditionError("replace_word: rank must be >= 1");
  if (substitute == token.text) {
    throw PreconditionError("replace_word: substitute equals the original");
  }
  for (const auto& r : replacements) {
    if (r.position == position) {
      throw PreconditionError("replace_word: position " +
                              std::to_string(position) +
                              " already replaced in this mutant");
    }
  }
  replacements.push_back(
      {position, token.text, std::string(substitute), rank});
  std::sort(replacements.begin(), replacements.end(),
            [](const auto& a, const auto& b) { return a.position < b.position; });
  Mutant m;
  m.seed_id = std::string(seed_id);
  m.text = Splice(seed, replacements);
  m.order_k = static_cast<int>(replacements.size());
  for (const auto& r : replacements) m.max_rank_n = std::max(m.max_rank_n, r.rank);
  m.replacements = std::move(replacements);
  return m;
}

struct Site {
  std::size_t position;
  std::vector<Neighbor> candidates;  // alphabetic neighbours, rank <= n
};

// Enumerates one priority level: mutants of exactly `order` replacements
// whose max rank is exactly `max_rank`.
class LevelEnumerator {
 public:
  LevelEnumerator(const TokenizedText& seed, const std::vector<Site>& sites,
                  int order, int max_rank)
      : seed_(seed), sites_(sites), order_(order), max_rank_(max_rank) {}

  template <typename Sink>
  void Run(Sink&& sink) {
    chosen_.clear();
    Recurse(0, false, sink);
  }

 private:
  template <typename Sink>
  void Recurse(std::size_t next_site, bool has_max, Sink& sink) {
    if (static_cast<int>(chosen_.size()) == order_) {
      if (has_max) sink(chosen_);
      return;
    }
    const std::size_t needed = order_ - chosen_.size();
    for (std::size_t s = next_site; s + needed <= sites_.size(); ++s) {
      const Site& site = sites_[s];
      for (const Neighbor& nb : site.candidates) {
        if (nb.rank > max_rank_) break;
        chosen_.push_back({site.position, seed_.tokens[site.position].text,
                           nb.token, nb.rank});
        Recurse(s + 1, has_max || nb.rank == max_rank_, sink);
        chosen_.pop_back();
      }
    }
  }

  const TokenizedText& seed_;
  const std::vector<Site>& sites_;
  int order_;
  int max_rank_;
  std::vector<Replacement> chosen_;
};

}  // namespace

std::size_t TokenizedText::ReplaceableCount() const {
  return static_cast<std::size_t>(std::count_if(
      tokens.begin(), tokens.end(), [](const Token& t) { return t.replaceable; }));
}

std::vector<std::string> TokenizedText::Texts() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

bool IsAlphabetic(std::string_view token) {
  return !token.empty() && std::all_of(token.begin(), token.end(), [](char c) {
           return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
         });
}

TokenizedText Tokenize(std::string_view text) {
  TokenizedText out;
  out.surface = std::string(text);
  const std::string& s = out.surface;
  std::size_t pos = 0;
  std::optional<std::size_t> chunk_begin;
  while (pos < s.size()) {
    const std::size_t ws = WhitespaceLength(s, pos);
    if (ws > 0) {
      if (chunk_begin) SplitChunk(out, *chunk_begin, pos);
      chunk_begin.reset();
      pos += ws;
    } else {
      if (!chunk_begin) chunk_begin = pos;
      ++pos;
    }
  }
  if (chunk_begin) SplitChunk(out, *chunk_begin, s.size());
  if (out.tokens.empty()) {
    throw PreconditionError("tokenize: text is empty or whitespace-only");
  }
  return out;
}

Mutant ReplaceWord(const TokenizedText& seed, std::string_view seed_id,
                   std::size_t position, std::string_view substitute, int rank) {
  return Apply(seed, seed_id, {}, position, substitute, rank);
}

Mutant ReplaceWord(const TokenizedText& seed, const Mutant& base,
                   std::size_t position, std::string_view substitute, int rank) {
  return Apply(seed, base.seed_id, base.replacements, position, substitute,
               rank);
}

GenerationResult GenerateParaphrases(const SeedTask& seed, int n, int k,
                                     const EmbeddingStore& store,
                                     std::size_t cap) {
  if (n < 1 || k < 1 || cap < 1) {
    throw PreconditionError("generate_paraphrases: n, k and cap must be >= 1");
  }
  GenerationResult result;
  result.seed = Tokenize(seed.prompt);
  result.replaceable_count = result.seed.ReplaceableCount();

  std::vector<Site> sites;
  for (std::size_t i = 0; i < result.seed.tokens.size(); ++i) {
    const Token& t = result.seed.tokens[i];
    if (!t.replaceable) continue;
    auto hood = store.Neighbors(t.text, static_cast<std::size_t>(n));
    if (!hood) {
      ++result.oov_sites;
      continue;
    }
    Site site{i, {}};
    for (auto& nb : hood->neighbors) {
      if (IsAlphabetic(nb.token) && nb.token != t.text) {
        site.candidates.push_back(std::move(nb));
      }
    }
    if (!site.candidates.empty()) sites.push_back(std::move(site));
  }
  if (result.oov_sites > 0) {
    result.diagnostics.push_back(std::to_string(result.oov_sites) +
                                 " out-of-vocabulary replacement site(s) skipped");
  }
  if (sites.empty()) {
    result.diagnostics.push_back("seed '" + seed.id +
                                 "' has no replaceable in-vocabulary tokens");
    return result;
  }

  const int max_order = std::min<int>(k, static_cast<int>(sites.size()));
  std::unordered_set<std::string> emitted;
  for (int order = 1; order <= max_order; ++order) {
    for (int rank = 1; rank <= n; ++rank) {
      const std::size_t remaining = cap - result.mutants.size();
      if (remaining == 0) {
        result.truncated = true;
        return result;
      }
      std::map<std::string, std::vector<Replacement>> level;
      LevelEnumerator enumerator(result.seed, sites, order, rank);
      enumerator.Run([&](const std::vector<Replacement>& chosen) {
        std::string text = Splice(result.seed, chosen);
        if (emitted.contains(text) || level.contains(text)) return;
        if (level.size() == remaining) {
          if (text >= level.rbegin()->first) {
            result.truncated = true;
            return;
          }
          level.erase(std::prev(level.end()));
          result.truncated = true;
        }
        level.emplace(std::move(text), chosen);
      });
      for (auto& [text, reps] : level) {
        Mutant m;
        m.seed_id = seed.id;
        m.text = text;
        m.order_k = order;
        m.max_rank_n = rank;
        m.replacements = std::move(reps);
        emitted.insert(text);
        result.mutants.push_back(std::move(m));
      }
    }
  }
  return result;
}

nlohmann::json ToJson(const Mutant& mutant) {
  nlohmann::json reps = nlohmann::json::array();
  for (const auto& r : mutant.replacements) {
    reps.push_back({{"position", r.position},
                    {"original", r.original},
                    {"substitute", r.substitute},
                    {"rank", r.rank}});
  }
  return {{"seed_id", mutant.seed_id},
          {"text", mutant.text},
          {"replacements", std::move(reps)},
          {"order_k", mutant.order_k},
          {"max_rank_n", mutant.max_rank_n}};
}

Mutant MutantFromJson(const nlohmann::json& j) {
  Mutant m;
  m.seed_id = j.at("seed_id").get<std::string>();
  m.text = j.at("text").get<std::string>();
  m.order_k = j.at("order_k").get<int>();
  m.max_rank_n = j.at("max_rank_n").get<int>();
  for (const auto& r : j.at("replacements")) {
    m.replacements.push_back({r.at("position").get<std::size_t>(),
                              r.at("original").get<std::string>(),
                              r.at("substitute").get<std::string>(),
                              r.at("rank").get<int>()});
  }
  return m;
}

}  // namespace robusta
