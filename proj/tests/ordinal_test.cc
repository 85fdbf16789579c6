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

#include "fatou/errors.h"
#include "fatou/ordinal.h"
#include "oracle.h"

namespace fatou {
namespace {

Ordinal O(const char* s) { return Ordinal::parse(s); }

oracle::SmallOrd random_small(std::mt19937_64& rng) {
  oracle::SmallOrd a;
  const std::size_t len = rng() % 4;
  for (std::size_t i = 0; i < len; ++i) a.coeff.push_back(rng() % 4);
  return a;
}

TEST(Ordinal, CompareExamples) {
  EXPECT_EQ(compare(Ordinal(), Ordinal()), std::strong_ordering::equal);
  EXPECT_EQ(compare(Ordinal::omega(), Ordinal::finite(3)), std::strong_ordering::greater);
  EXPECT_EQ(compare(O("w*2+1"), O("w*2")), std::strong_ordering::greater);
  EXPECT_LT(O("w^w"), O("w^(w+1)"));
  EXPECT_LT(O("w^2*3+w*7"), O("w^3"));
}

TEST(Ordinal, SuccessorExamples) {
  EXPECT_EQ(successor(Ordinal()), Ordinal::finite(1));
  EXPECT_EQ(successor(Ordinal::omega()), O("w+1"));
  EXPECT_EQ(successor(O("w^2+w")), O("w^2+w+1"));
}

TEST(Ordinal, ClassifyExamples) {
  const auto five = classify(Ordinal::finite(5));
  EXPECT_EQ(five.kind, OrdinalKind::kSuccessor);
  EXPECT_EQ(*five.predecessor, Ordinal::finite(4));
  EXPECT_EQ(classify(Ordinal::omega()).kind, OrdinalKind::kLimit);
  EXPECT_EQ(classify(O("w^2*3")).kind, OrdinalKind::kLimit);
  EXPECT_EQ(classify(Ordinal()).kind, OrdinalKind::kZero);
  EXPECT_EQ(predecessor(O("w*2+1")), O("w*2"));
}

TEST(Ordinal, FundamentalSequenceExamples) {
  EXPECT_EQ(fundamental_sequence(Ordinal::omega(), 3), Ordinal::finite(3));
  EXPECT_EQ(fundamental_sequence(O("w^2"), 2), O("w*2"));
  EXPECT_EQ(fundamental_sequence(O("w^w"), 2), O("w^2"));
  EXPECT_EQ(fundamental_sequence(O("w^2+w"), 4), O("w^2+4"));
  EXPECT_EQ(fundamental_sequence(O("w^(w+1)"), 3), O("w^w*3"));
  EXPECT_THROW(fundamental_sequence(Ordinal::finite(2), 1), PreconditionError);
  EXPECT_THROW(fundamental_sequence(Ordinal(), 1), PreconditionError);
}

TEST(Ordinal, ParseAndPrint) {
  EXPECT_EQ(O("omega*2").str(), "w*2");
  EXPECT_EQ(O("3+w"), Ordinal::omega());
  EXPECT_EQ(O("w^w^2"), Ordinal::monomial(O("w^2")));
  EXPECT_EQ(O("(w+1)*2"), O("w*2+1"));
  for (const char* bad : {"", "w^", "x", "w+*2", "(w", "2*w*"}) {
    EXPECT_THROW(O(bad), ParseError) << bad;
  }
}

TEST(Ordinal, JsonEncoding) {
  nlohmann::json j;
  to_json(j, Ordinal());
  EXPECT_EQ(j.dump(), "[]");
  to_json(j, O("w^2*3+5"));
  EXPECT_EQ(j.dump(), "[[[[[],2]],3],[[],5]]");
  EXPECT_EQ(j.get<Ordinal>(), O("w^2*3+5"));
}

TEST(Ordinal, StartIndex) {
  EXPECT_EQ(start_index(Ordinal::omega(), Ordinal::finite(0)), 1u);
  EXPECT_EQ(start_index(Ordinal::omega(), Ordinal::finite(4)), 5u);
  EXPECT_EQ(start_index(O("w^2"), O("w*3+1")), 4u);
}

// Comparison against the coefficient-vector model below w^w.
TEST(OrdinalProperty, CompareAgreesWithOracle) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 5000; ++i) {
    const auto a = random_small(rng), b = random_small(rng);
    const Ordinal oa = a.to_ordinal(), ob = b.to_ordinal();
    ASSERT_EQ(oa < ob, a < b) << oa << " vs " << ob;
    ASSERT_EQ(oa == ob, a == b);
  }
}

TEST(OrdinalProperty, FundamentalSequenceAgreesWithOracle) {
  std::mt19937_64 rng(2);
  int limits = 0;
  for (int i = 0; i < 3000; ++i) {
    auto a = random_small(rng);
    a.trim();
    const Ordinal oa = a.to_ordinal();
    if (!is_limit(oa)) continue;
    ++limits;
    for (std::uint64_t n = 1; n <= 6; ++n) {
      const Ordinal f = fundamental_sequence(oa, n);
      ASSERT_EQ(f, a.fs(n).to_ordinal()) << oa << " at " << n;
      ASSERT_LT(f, fundamental_sequence(oa, n + 1));
      ASSERT_LT(f, oa);
    }
  }
  EXPECT_GT(limits, 100);
}

TEST(OrdinalProperty, SuccessorIsCover) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 3000; ++i) {
    const Ordinal a = random_small(rng).to_ordinal();
    const Ordinal b = random_small(rng).to_ordinal();
    ASSERT_EQ(b < successor(a), b <= a);
    const auto c = classify(successor(a));
    ASSERT_EQ(c.kind, OrdinalKind::kSuccessor);
    ASSERT_EQ(*c.predecessor, a);
  }
}

TEST(OrdinalProperty, DeepLimitsAreIncreasing) {
  for (const char* s : {"w^w", "w^(w+1)", "w^w^w", "w^(w*2)+w^3", "w^w^2*2"}) {
    const Ordinal a = O(s);
    for (std::uint64_t n = 1; n <= 8; ++n) {
      ASSERT_LT(fundamental_sequence(a, n), fundamental_sequence(a, n + 1)) << s;
      ASSERT_LT(fundamental_sequence(a, n + 1), a) << s;
    }
  }
}

}  // namespace
}  // namespace fatou
