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

#include "robusta/tree.h"

#include <algorithm>
#include <cctype>

#include "robusta/error.h"

namespace robusta {
namespace {

struct Postorder {
  std::vector<const LabeledTree*> nodes;  // 1-based; nodes[0] unused
  std::vector<std::size_t> leftmost;      // leftmost leaf descendant
  std::vector<std::size_t> keyroots;

  explicit Postorder(const LabeledTree& root) {
    nodes.push_back(nullptr);
    leftmost.push_back(0);
    Visit(root);
    // Keyroots: the highest-numbered node for each distinct leftmost leaf.
    std::vector<bool> taken(nodes.size(), false);
    for (std::size_t i = nodes.size() - 1; i >= 1; --i) {
      if (!taken[leftmost[i]]) {
        taken[leftmost[i]] = true;
        keyroots.push_back(i);
      }
    }
    std::sort(keyroots.begin(), keyroots.end());
  }

  std::size_t Visit(const LabeledTree& node) {
    std::size_t first_leaf = 0;
    for (const auto& child : node.children) {
      const std::size_t leaf = Visit(child);
      if (first_leaf == 0) first_leaf = leaf;
    }
    nodes.push_back(&node);
    const std::size_t id = nodes.size() - 1;
    leftmost.push_back(first_leaf == 0 ? id : first_leaf);
    return leftmost.back();
  }

  std::size_t size() const { return nodes.size() - 1; }
};

bool IsOpen(char c) { return c == '(' || c == '[' || c == '{'; }
bool IsClose(char c) { return c == ')' || c == ']' || c == '}'; }
char Closer(char open) { return open == '(' ? ')' : open == '[' ? ']' : '}'; }
bool IsWord(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

std::vector<std::string> CodeTokens(std::string_view code) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < code.size()) {
    const auto c = static_cast<unsigned char>(code[i]);
    if (std::isspace(c)) {
      ++i;
    } else if (IsWord(c)) {
      const std::size_t start = i;
      while (i < code.size() && IsWord(static_cast<unsigned char>(code[i]))) ++i;
      out.emplace_back(code.substr(start, i - start));
    } else if (IsOpen(code[i]) || IsClose(code[i])) {
      out.emplace_back(1, code[i++]);
    } else {
      const std::size_t start = i;
      while (i < code.size()) {
        const auto d = static_cast<unsigned char>(code[i]);
        if (std::isspace(d) || IsWord(d) || IsOpen(code[i]) || IsClose(code[i])) break;
        ++i;
      }
      out.emplace_back(code.substr(start, i - start));
    }
  }
  return out;
}

bool NeedsQuotes(std::string_view label) {
  if (label.empty()) return true;
  return std::any_of(label.begin(), label.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
           c == '"' || c == '\\';
  });
}

void WriteLabel(std::string& out, std::string_view label) {
  if (!NeedsQuotes(label)) {
    out += label;
    return;
  }
  out.push_back('"');
  for (char c : label) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
}

void WriteSexpr(std::string& out, const LabeledTree& t) {
  if (t.children.empty()) {
    WriteLabel(out, t.label);
    return;
  }
  out.push_back('(');
  WriteLabel(out, t.label);
  for (const auto& c : t.children) {
    out.push_back(' ');
    WriteSexpr(out, c);
  }
  out.push_back(')');
}

class SexprParser {
 public:
  explicit SexprParser(std::string_view text) : text_(text) {}

  LabeledTree ParseAll() {
    LabeledTree t = ParseTree();
    SkipSpace();
    if (pos_ != text_.size()) Fail("trailing characters");
    return t;
  }

 private:
  [[noreturn]] void Fail(const std::string& why) const {
    throw ParseError("s-expression: " + why + " at offset " + std::to_string(pos_));
  }

  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  std::string ParseLabel() {
    SkipSpace();
    if (pos_ >= text_.size()) Fail("unexpected end of input");
    std::string out;
    if (text_[pos_] == '"') {
      ++pos_;
      while (true) {
        if (pos_ >= text_.size()) Fail("unterminated quoted label");
        char c = text_[pos_++];
        if (c == '"') break;
        if (c == '\\') {
          if (pos_ >= text_.size()) Fail("dangling escape");
          c = text_[pos_++];
        }
        out.push_back(c);
      }
      return out;
    }
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '"') break;
      out.push_back(c);
      ++pos_;
    }
    if (out.empty()) Fail("expected a label");
    return out;
  }

  LabeledTree ParseTree() {
    SkipSpace();
    if (pos_ >= text_.size()) Fail("unexpected end of input");
    if (text_[pos_] == ')') Fail("unexpected ')'");
    if (text_[pos_] != '(') return {ParseLabel(), {}};
    ++pos_;
    LabeledTree t{ParseLabel(), {}};
    while (true) {
      SkipSpace();
      if (pos_ >= text_.size()) Fail("missing ')'");
      if (text_[pos_] == ')') {
        ++pos_;
        return t;
      }
      t.children.push_back(ParseTree());
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t LabeledTree::Size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.Size();
  return n;
}

std::size_t TreeEditDistance(const LabeledTree& a, const LabeledTree& b) {
  const Postorder pa(a), pb(b);
  const std::size_t na = pa.size(), nb = pb.size();
  std::vector<std::vector<std::size_t>> tree_dist(na + 1,
                                                  std::vector<std::size_t>(nb + 1, 0));
  std::vector<std::vector<std::size_t>> forest(na + 2, std::vector<std::size_t>(nb + 2, 0));

  for (std::size_t i : pa.keyroots) {
    for (std::size_t j : pb.keyroots) {
      const std::size_t li = pa.leftmost[i], lj = pb.leftmost[j];
      // forest[x][y]: distance between forests l(i)..x-1+l(i) and l(j)..;
      // indices are offset so that row/column 0 is the empty forest.
      auto fd = [&](std::size_t x, std::size_t y) -> std::size_t& {
        return forest[x - li + 1][y - lj + 1];
      };
      forest[0][0] = 0;
      for (std::size_t x = li; x <= i; ++x) forest[x - li + 1][0] = forest[x - li][0] + 1;
      for (std::size_t y = lj; y <= j; ++y) forest[0][y - lj + 1] = forest[0][y - lj] + 1;
      for (std::size_t x = li; x <= i; ++x) {
        for (std::size_t y = lj; y <= j; ++y) {
          const std::size_t del = forest[x - li][y - lj + 1] + 1;
          const std::size_t ins = forest[x - li + 1][y - lj] + 1;
          if (pa.leftmost[x] == li && pb.leftmost[y] == lj) {
            const std::size_t rel =
                forest[x - li][y - lj] +
                (pa.nodes[x]->label == pb.nodes[y]->label ? 0 : 1);
            fd(x, y) = std::min({del, ins, rel});
            tree_dist[x][y] = fd(x, y);
          } else {
            const std::size_t sub = forest[pa.leftmost[x] - li][pb.leftmost[y] - lj] +
                                    tree_dist[x][y];
            fd(x, y) = std::min({del, ins, sub});
          }
        }
      }
    }
  }
  return tree_dist[na][nb];
}

BracketTreeResult BracketTree(std::string_view code) {
  const auto tokens = CodeTokens(code);
  BracketTreeResult result;
  result.tree.label = "root";

  std::vector<LabeledTree> stack;
  std::vector<char> opens;
  stack.push_back({"root", {}});
  bool balanced = true;
  for (const auto& tok : tokens) {
    if (tok.size() == 1 && IsOpen(tok[0])) {
      stack.push_back({tok, {}});
      opens.push_back(tok[0]);
    } else if (tok.size() == 1 && IsClose(tok[0])) {
      if (opens.empty() || Closer(opens.back()) != tok[0]) {
        balanced = false;
        break;
      }
      LabeledTree done = std::move(stack.back());
      stack.pop_back();
      opens.pop_back();
      stack.back().children.push_back(std::move(done));
    } else {
      stack.back().children.push_back({tok, {}});
    }
  }
  if (balanced && opens.empty()) {
    result.tree = std::move(stack.front());
    return result;
  }
  for (const auto& tok : tokens) result.tree.children.push_back({tok, {}});
  result.diagnostic = "unbalanced delimiters; using a flat token list";
  return result;
}

std::string ToSexpr(const LabeledTree& tree) {
  std::string out;
  WriteSexpr(out, tree);
  return out;
}

LabeledTree ParseSexpr(std::string_view text) {
  return SexprParser(text).ParseAll();
}

}  // namespace robusta
