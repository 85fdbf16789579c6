// Copyright 2026 The Fatou Workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fatou/construction.h"
#include "fatou/errors.h"
#include "fatou/families.h"
#include "fatou/tree.h"
#include "oracle.h"

namespace fatou {
namespace {

Ordinal O(const char* s) { return Ordinal::parse(s); }
Ordinal F(std::uint64_t n) { return Ordinal::finite(n); }

FiniteTree tree_of(std::set<LabelString> nodes) { return FiniteTree::from_nodes(std::move(nodes)); }

FiniteTree complete_binary(std::size_t depth) {
  FiniteTree t;
  std::vector<LabelString> layer{{}};
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<LabelString> next;
    for (const auto& s : layer) {
      for (const char* c : {"0", "1"}) {
        LabelString e = s;
        e.push_back(c);
        t.insert_path(e);
        next.push_back(e);
      }
    }
    layer = next;
  }
  return t;
}

FiniteTree random_tree(std::mt19937_64& rng, std::set<LabelString>* out) {
  FiniteTree t;
  const int paths = 1 + static_cast<int>(rng() % 6);
  for (int p = 0; p < paths; ++p) {
    LabelString s(rng() % 6);
    for (auto& l : s) l = std::string(1, static_cast<char>('a' + rng() % 3));
    t.insert_path(s);
  }
  *out = t.nodes();
  return t;
}

TEST(FiniteRank, Examples) {
  EXPECT_EQ(finite_rank(FiniteTree()), F(1));
  EXPECT_EQ(finite_rank(tree_of({{}, {"y1"}})), F(2));
  EXPECT_EQ(finite_rank(complete_binary(3)), F(4));
  const FiniteTree ab = tree_of({{}, {"a"}, {"a", "b"}});
  EXPECT_EQ(node_rank(ab, {}), F(2));
  EXPECT_EQ(node_rank(tree_of({{}, {"a"}}), {"a"}), F(0));
  EXPECT_EQ(node_rank(tree_of({{}, {"a"}}), {}), F(1));
  EXPECT_THROW(node_rank(ab, {"b"}), PreconditionError);
}

TEST(FiniteRank, RejectsMalformedTrees) {
  EXPECT_THROW(tree_of({{}, {"a", "b"}}), PreconditionError);
  EXPECT_THROW(tree_of({{"a"}}), PreconditionError);
}

TEST(FiniteRank, MatchesLiteralDefinition) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 2000; ++i) {
    std::set<LabelString> nodes;
    const FiniteTree t = random_tree(rng, &nodes);
    ASSERT_EQ(finite_rank(t), F(oracle::literal_rank(nodes)));
    for (const auto& s : nodes) {
      ASSERT_LT(node_rank(t, s), finite_rank(t));
    }
  }
}

TEST(FiniteRank, MonotoneUnderInclusion) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 1000; ++i) {
    std::set<LabelString> a, b;
    FiniteTree ta = random_tree(rng, &a);
    FiniteTree tb = ta;
    random_tree(rng, &b);
    for (const auto& s : b) tb.insert_path(s);
    ASSERT_LE(finite_rank(ta), finite_rank(tb));
  }
}

TEST(FiniteTree, JsonAndDot) {
  const FiniteTree t = complete_binary(2);
  nlohmann::json j;
  to_json(j, t);
  EXPECT_EQ(finite_tree_from_json(j), t);
  EXPECT_EQ(finite_tree_from_json(j.at("nodes")), t);
  const std::string dot = to_dot(t, "B");
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  EXPECT_THROW(finite_tree_from_json(nlohmann::json{{"schema", "x"}, {"nodes", {}}}), ParseError);
}

TEST(StructuredRank, Examples) {
  const TreePtr t1 = build(F(1))->witness;
  EXPECT_EQ(t1->kind(), TreeKind::kExplicit);
  EXPECT_EQ(structured_rank(*t1), F(2));
  const TreePtr t2 = StructuredTree::prefixed(z_seq(Space(F(2)), 1), t1);
  EXPECT_EQ(structured_rank(*t2), F(3));
  const TreePtr tw = build(Ordinal::omega())->witness;
  EXPECT_EQ(tw->kind(), TreeKind::kWeave);
  EXPECT_GT(structured_rank(*tw), Ordinal::omega());
  EXPECT_EQ(structured_rank(*tw), O("w+1"));
}

TEST(StructuredRank, PrefixedAddsOne) {
  for (const char* a : {"1", "3", "w", "w*2", "w^2"}) {
    const BundlePtr b = build(O(a));
    const TreePtr p = StructuredTree::prefixed(z_seq(Space(successor(O(a))), 1), b->witness);
    EXPECT_EQ(structured_rank(*p), successor(structured_rank(*b->witness))) << a;
  }
}

TEST(StructuredRank, MissingComponentIsReported) {
  const TreePtr broken = StructuredTree::weave(Ordinal::omega(), [](std::uint64_t m) -> TreePtr {
    if (m == 2) return nullptr;
    return build(F(m))->witness;
  });
  EXPECT_THROW(structured_rank(*broken), CertificateError);
}

TEST(StructuredRank, ClaimedCertificateMustMatch) {
  const TreePtr t = StructuredTree::with_claimed_cert(build(F(2))->witness, F(7), {"claimed"});
  EXPECT_THROW(structured_rank(*t), CertificateError);
}

// For finite stages the witness tree is explicit after unfolding, and the
// derived certificate must equal the brute-force rank.
TEST(StructuredRank, FiniteLadderMatchesBruteForce) {
  for (std::uint64_t a = 1; a <= 6; ++a) {
    const TreePtr t = build(F(a))->witness;
    const FiniteTree full = truncate(*t, a + 5, 1);
    EXPECT_EQ(structured_rank(*t), F(a + 1));
    EXPECT_EQ(finite_rank(full), F(a + 1));
    std::set<LabelString> nodes = full.nodes();
    EXPECT_EQ(oracle::literal_rank(nodes), a + 1);
  }
}

TEST(Truncate, Examples) {
  const TreePtr t1 = build(F(1))->witness;
  EXPECT_EQ(truncate(*t1, 10, 10), t1->finite());
  const TreePtr p = StructuredTree::prefixed(z_seq(Space(F(2)), 1), t1);
  EXPECT_EQ(finite_rank(truncate(*p, 2, 1)), F(3));
  const FiniteTree bare = complete_binary(3);
  const TreePtr e = StructuredTree::explicit_tree(bare);
  EXPECT_EQ(finite_rank(truncate(*e, 2, 1)), F(3));
}

TEST(Truncate, SoundAndUnboundedBelowLimitCertificates) {
  for (const char* a : {"w", "w+1", "w*2", "w^2"}) {
    const TreePtr t = build(O(a))->witness;
    const Ordinal cert = structured_rank(*t);
    Ordinal last;
    for (std::uint64_t c = 1; c <= 4; ++c) {
      const Ordinal r = finite_rank(truncate(*t, c + 4, c));
      ASSERT_LE(r, cert) << a;
      ASSERT_GE(r, last) << a;
      ASSERT_GE(r, F(c)) << a;
      last = r;
    }
  }
  // At w the truncation keeping c components has rank exactly c + 2.
  const TreePtr tw = build(Ordinal::omega())->witness;
  for (std::uint64_t c = 1; c <= 6; ++c) {
    EXPECT_EQ(finite_rank(truncate(*tw, c + 3, c)), F(c + 2));
  }
}

TEST(Truncate, TruncationSet) {
  EXPECT_TRUE(truncation_set(Ordinal(), 3).empty());
  EXPECT_EQ(truncation_set(F(4), 3), std::vector<Ordinal>{F(3)});
  const auto lim = truncation_set(O("w*2"), 3);
  ASSERT_EQ(lim.size(), 3u);
  EXPECT_EQ(lim[0], O("w+1"));
  EXPECT_EQ(lim[2], O("w+3"));
}

TEST(CountableRefinement, Examples) {
  const TreePtr t1 = build(F(1))->witness;
  EXPECT_EQ(countable_refinement(t1, F(2)), t1);
  const TreePtr tw = build(Ordinal::omega())->witness;
  EXPECT_GE(countable_refinement(tw, O("w+1"))->rank_cert(), O("w+1"));
  const TreePtr tw1 = build(O("w+1"))->witness;
  const TreePtr r = countable_refinement(tw1, O("w+2"));
  EXPECT_EQ(r->kind(), TreeKind::kPrefixed);
  EXPECT_EQ(structured_rank(*r), O("w+2"));
  EXPECT_THROW(countable_refinement(t1, F(3)), CertificateError);
}

TEST(StructuredTree, JsonRoundTrip) {
  for (const char* a : {"1", "2", "w", "w+1", "w*2"}) {
    const TreePtr t = build(O(a))->witness;
    nlohmann::json j;
    to_json(j, *t);
    const TreePtr back =
        structured_tree_from_json(j, [](const Ordinal& s) { return build(s)->witness; });
    nlohmann::json j2;
    to_json(j2, *back);
    EXPECT_EQ(j.dump(), j2.dump()) << a;
    EXPECT_EQ(structured_rank(*back), structured_rank(*t));
  }
}

TEST(StructuredTree, ChildWithRankFollowsCertificates) {
  const TreePtr t = build(O("w+1"))->witness;
  const NodeRef root = t->root();
  EXPECT_EQ(t->rank_floor(root), O("w+1"));
  const auto c = t->child_with_rank(root, Ordinal::omega());
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->first, z_seq(Space(O("w+1")), 1));
  const auto g = t->child_with_rank(c->second, F(5));
  ASSERT_TRUE(g.has_value());
  EXPECT_GE(t->rank_floor(g->second), F(5));
  EXPECT_FALSE(t->child_with_rank(root, O("w+1")).has_value());
}

}  // namespace
}  // namespace fatou
