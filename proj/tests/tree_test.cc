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

#include <random>

#include <gtest/gtest.h>

#include "robusta/error.h"
#include "robusta/tree.h"
#include "tree_oracle.h"

namespace robusta {
namespace {

LabeledTree Leaf(std::string label) { return {std::move(label), {}}; }

TEST(TreeEditDistanceTest, Basics) {
  EXPECT_EQ(TreeEditDistance(Leaf("a"), Leaf("a")), 0u);
  EXPECT_EQ(TreeEditDistance(Leaf("a"), Leaf("b")), 1u);
  const LabeledTree t{"f", {Leaf("a"), {"g", {Leaf("b"), Leaf("c")}}}};
  const LabeledTree u{"f", {Leaf("a"), Leaf("b"), Leaf("c")}};
  EXPECT_EQ(TreeEditDistance(t, u), 1u);  // delete g
  EXPECT_EQ(TreeEditDistance(Leaf("x"), t), 5u);
}

TEST(TreeEditDistanceTest, ClassicExample) {
  // f(d(a c(b)) e) vs f(c(d(a b)) e): distance 2.
  const LabeledTree a{"f", {{"d", {Leaf("a"), {"c", {Leaf("b")}}}}, Leaf("e")}};
  const LabeledTree b{"f", {{"c", {{"d", {Leaf("a"), Leaf("b")}}}}, Leaf("e")}};
  EXPECT_EQ(TreeEditDistance(a, b), 2u);
}

TEST(TreeEditDistanceTest, AgreesWithOracleOnSmallTrees) {
  testing::ForestEditOracle oracle;
  std::vector<LabeledTree> trees;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (auto& t : testing::AllTrees(n, {"a", "b"})) trees.push_back(std::move(t));
  }
  ASSERT_EQ(trees.size(), 2u + 4u + 16u + 80u);
  for (const auto& a : trees) {
    for (const auto& b : trees) {
      ASSERT_EQ(TreeEditDistance(a, b), oracle.Distance(a, b))
          << ToSexpr(a) << " vs " << ToSexpr(b);
    }
  }
}

TEST(TreeEditDistanceTest, SymmetryIdentityTriangle) {
  std::mt19937_64 rng(99);
  const std::vector<std::string> labels = {"a", "b", "c"};
  for (int i = 0; i < 300; ++i) {
    const auto a = testing::RandomTree(rng, 1 + rng() % 9, labels);
    const auto b = testing::RandomTree(rng, 1 + rng() % 9, labels);
    const auto c = testing::RandomTree(rng, 1 + rng() % 9, labels);
    EXPECT_EQ(TreeEditDistance(a, a), 0u);
    const auto ab = TreeEditDistance(a, b);
    EXPECT_EQ(ab, TreeEditDistance(b, a));
    EXPECT_LE(TreeEditDistance(a, c), ab + TreeEditDistance(b, c));
    EXPECT_LE(ab, a.Size() + b.Size());
  }
}

TEST(BracketTreeTest, SingleGroup) {
  const auto r = BracketTree("f(x)");
  EXPECT_FALSE(r.diagnostic);
  const LabeledTree expected{"root", {Leaf("f"), {"(", {Leaf("x")}}}};
  EXPECT_EQ(r.tree, expected) << ToSexpr(r.tree);
}

TEST(BracketTreeTest, NestedGroups) {
  const auto r = BracketTree("{a {b} }");
  const LabeledTree expected{"root", {{"{", {Leaf("a"), {"{", {Leaf("b")}}}}}};
  EXPECT_EQ(r.tree, expected) << ToSexpr(r.tree);
}

TEST(BracketTreeTest, UnbalancedFallsBackToFlat) {
  const auto r = BracketTree("a)");
  ASSERT_TRUE(r.diagnostic);
  const LabeledTree expected{"root", {Leaf("a"), Leaf(")")}};
  EXPECT_EQ(r.tree, expected) << ToSexpr(r.tree);
  EXPECT_TRUE(BracketTree("(a]").diagnostic);
  EXPECT_TRUE(BracketTree("((a)").diagnostic);
}

TEST(BracketTreeTest, OperatorsAndWords) {
  const auto r = BracketTree("x += foo_1;");
  const LabeledTree expected{"root", {Leaf("x"), Leaf("+="), Leaf("foo_1"), Leaf(";")}};
  EXPECT_EQ(r.tree, expected) << ToSexpr(r.tree);
}

TEST(SexprTest, RoundTripWithQuotedLabels) {
  const LabeledTree t{"root",
                      {Leaf("a b"), {"(", {Leaf("x"), Leaf("\"q\"")}}, Leaf("back\\slash"),
                       Leaf("")}};
  const std::string s = ToSexpr(t);
  EXPECT_EQ(ParseSexpr(s), t) << s;
  EXPECT_EQ(ParseSexpr("(f a (g b c))"),
            (LabeledTree{"f", {Leaf("a"), {"g", {Leaf("b"), Leaf("c")}}}}));
  EXPECT_EQ(ParseSexpr("leaf"), Leaf("leaf"));
  EXPECT_THROW(ParseSexpr("(f a"), ParseError);
  EXPECT_THROW(ParseSexpr("a b"), ParseError);
  EXPECT_THROW(ParseSexpr(""), ParseError);
}

TEST(SexprTest, RandomRoundTrip) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto t = testing::RandomTree(rng, 1 + rng() % 12, {"a", "(", "x y", "\""});
    EXPECT_EQ(ParseSexpr(ToSexpr(t)), t);
  }
}

}  // namespace
}  // namespace robusta
