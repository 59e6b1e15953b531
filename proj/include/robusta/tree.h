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

// Ordered labeled trees and their edit distance.

#ifndef ROBUSTA_TREE_H_
#define ROBUSTA_TREE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace robusta {

struct LabeledTree {
  std::string label;
  std::vector<LabeledTree> children;

  std::size_t Size() const;
  friend bool operator==(const LabeledTree&, const LabeledTree&) = default;
};

// Zhang-Shasha: minimum number of unit-cost relabel, insert and delete
// operations turning `a` into `b`.
std::size_t TreeEditDistance(const LabeledTree& a, const LabeledTree& b);

struct BracketTreeResult {
  LabeledTree tree;
  std::optional<std::string> diagnostic;  // set when the flat fallback was used
};

// Language-agnostic stand-in for an AST: tokens become leaves under a "root"
// node and every balanced (), [] or {} group becomes an internal node labeled
// by its opening delimiter. Unbalanced input yields a flat token list.
BracketTreeResult BracketTree(std::string_view code);

// S-expression form: a leaf is a bare label, an internal node is
// "(label child ...)". Labels with whitespace, parentheses, quotes or
// backslashes are written as double-quoted strings.
std::string ToSexpr(const LabeledTree& tree);
// Throws ParseError.
LabeledTree ParseSexpr(std::string_view text);

}  // namespace robusta

#endif  // ROBUSTA_TREE_H_
