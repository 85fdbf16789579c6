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
#include "oracle.h"

namespace fatou {
namespace {

Rational R(long p, long q = 1) { return Rational(p, q); }
Ordinal O(const char* s) { return Ordinal::parse(s); }

constexpr int kInstances = 10000;

Rational random_rational(std::mt19937_64& rng, long range = 9) {
  const long p = static_cast<long>(rng() % (2 * range + 1)) - range;
  const long q = static_cast<long>(rng() % 6) + 1;
  return R(p, q);
}

Element random_base(const Space& s, std::mt19937_64& rng) {
  std::vector<Rational> prefix(rng() % 6);
  for (auto& r : prefix) r = random_rational(rng);
  return Element::base(s, std::move(prefix), random_rational(rng));
}

Space random_base_rooted(std::mt19937_64& rng) { return Space(Ordinal::finite(1 + rng() % 5)); }

// --- examples ---------------------------------------------------------------

TEST(Lattice, PositivePartExample) {
  const Space s = Space::base();
  EXPECT_EQ(pos_part(Element::base(s, {R(-1), R(2)}, R(0))), Element::base(s, {R(0), R(2)}, R(0)));
  const Element x = Element::base(s, {R(1, 2)}, R(-3));
  EXPECT_EQ(join(x, x), x);
  EXPECT_EQ(abs(x), Element::base(s, {R(1, 2)}, R(3)));
}

TEST(Lattice, NormExamples) {
  const Space s = Space::base();
  EXPECT_EQ(norm(one(s)), R(1));
  const Element three = Element::base(s, {R(3)}, R(0));
  EXPECT_EQ(norm(three), R(1));
  EXPECT_EQ(norm(three.restaged(Space(Ordinal::finite(2)))), R(1, 7));
  EXPECT_THROW(add(one(s), one(Space(Ordinal::finite(2)))), SpaceMismatch);
}

TEST(Lattice, PhiExamples) {
  const Space s = Space::base();
  for (std::uint64_t n = 1; n < 6; ++n) EXPECT_EQ(phi(z_seq(s, n)), R(1));
  EXPECT_EQ(phi(pos_part(sub(z_seq(s, 1), z_seq(s, 4)))), R(0));
  const Space w(Ordinal::omega());
  EXPECT_EQ(phi(Element::limit(w, {one(Space(Ordinal::finite(1)))}, TailExpr::zero())), R(0));
  EXPECT_EQ(phi(z_seq(w, 3)), R(1));
}

TEST(Lattice, OrderExamples) {
  const Space s = Space::base();
  EXPECT_TRUE(leq(z_seq(s, 2), z_seq(s, 1)).is_true());
  EXPECT_TRUE(leq(z_seq(s, 1), z_seq(s, 1)).is_true());
  EXPECT_TRUE(leq(z_seq(s, 1), z_seq(s, 2)).is_false());
  const Space w(Ordinal::omega());
  EXPECT_TRUE(leq(z_seq(w, 5), z_seq(w, 2)).is_true());
  EXPECT_FALSE(leq(z_seq(w, 2), z_seq(w, 5)).is_true());
}

TEST(Lattice, ZSequenceShapes) {
  const Space s = Space::base();
  EXPECT_EQ(z_seq(s, 2), Element::base(s, {R(0), R(0)}, R(1)));
  const Space two(Ordinal::finite(2));
  EXPECT_EQ(z_seq(two, 3), z_seq(s, 3).restaged(two));
  const Element zw = z_seq(Space(Ordinal::omega()), 1);
  EXPECT_TRUE(zw.components().empty());
  EXPECT_EQ(zw.tail()->op(), TailOp::kZSeq);
  EXPECT_EQ(zw.tail()->k(), 1u);
  const NormBound b = norm_bounds(zw);
  EXPECT_EQ(b.lower, R(1));
  EXPECT_EQ(b.upper, R(1));
}

TEST(Lattice, PiBasis) {
  const Space s = Space::base();
  for (std::uint64_t i = 1; i <= 50; ++i) {
    const Element b = pi_basis(s, i);
    EXPECT_TRUE(is_strictly_positive(b).is_true());
    int nonzero = 0;
    for (const auto& r : b.prefix()) nonzero += !r.is_zero();
    EXPECT_EQ(nonzero, 1);
    EXPECT_TRUE(b.tail_value().is_zero());
    EXPECT_EQ(pi_basis(Space(Ordinal::finite(3)), i), b.restaged(Space(Ordinal::finite(3))));
  }
  const Element lb = pi_basis(Space(Ordinal::omega()), 7);
  EXPECT_TRUE(lb.tail()->op() == TailOp::kZero);
  EXPECT_TRUE(is_strictly_positive(lb).is_true());
}

TEST(Lattice, SphereExamples) {
  const Space s = Space::base();
  EXPECT_TRUE(in_sphere_S(z_seq(s, 3)));
  EXPECT_FALSE(in_sphere_S(Element::zero(s)));
  EXPECT_FALSE(in_sphere_S(scale(R(2), z_seq(s, 1))));
  EXPECT_TRUE(in_sphere_S(z_seq(Space(O("w*2")), 2)));
}

TEST(Lattice, JsonRoundTrip) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const Element x = random_base(random_base_rooted(rng), rng);
    nlohmann::json j;
    to_json(j, x);
    EXPECT_EQ(element_from_json(j), x);
  }
  const Element w = sub(z_seq(Space(O("w^2")), 1), z_seq(Space(O("w^2")), 3));
  nlohmann::json j;
  to_json(j, w);
  nlohmann::json j2;
  to_json(j2, element_from_json(j));
  EXPECT_EQ(j.dump(), j2.dump());
}

// --- properties on random exact instances ------------------------------------

TEST(LatticeProperty, PositivePartIdentityMatchesOracle) {
  std::mt19937_64 rng(101);
  for (int i = 0; i < kInstances; ++i) {
    const Space s = random_base_rooted(rng);
    const Element x = random_base(s, rng), y = random_base(s, rng);
    const Element lhs = pos_part(sub(y, x));
    ASSERT_EQ(lhs, sub(y, meet(x, y)));
    const auto ox = oracle::from(x), oy = oracle::from(y);
    const auto expect = oracle::zip(oy, ox, [](oracle::Frac b, oracle::Frac a) {
      return oracle::fmax(b - a, oracle::Frac(0));
    });
    const auto got = oracle::from(lhs);
    for (std::size_t j = 1; j <= expect.len() + 1; ++j) ASSERT_TRUE(got.at(j) == expect.at(j));
  }
}

TEST(LatticeProperty, PositivePartIdentityOnLimitComponents) {
  std::mt19937_64 rng(102);
  const Space w(Ordinal::omega());
  for (int i = 0; i < 300; ++i) {
    std::vector<Element> xs, ys;
    for (std::uint64_t m = 1; m <= 3; ++m) {
      xs.push_back(random_base(w.child(m), rng));
      ys.push_back(random_base(w.child(m), rng));
    }
    const Element x = Element::limit(w, xs, TailExpr::zseq(1 + rng() % 3));
    const Element y = Element::limit(w, ys, TailExpr::zseq(1 + rng() % 3));
    const Element lhs = pos_part(sub(y, x)), rhs = sub(y, meet(x, y));
    for (std::uint64_t m = 1; m <= 7; ++m) ASSERT_EQ(lhs.component(m), rhs.component(m));
  }
}

TEST(LatticeProperty, NormAxioms) {
  std::mt19937_64 rng(103);
  for (int i = 0; i < kInstances; ++i) {
    const Space s = random_base_rooted(rng);
    const Element x = random_base(s, rng), y = random_base(s, rng);
    const Rational c = random_rational(rng);
    const unsigned h = static_cast<unsigned>(s.height());
    ASSERT_TRUE(oracle::same(norm(x), oracle::norm_at_height(oracle::from(x), h)));
    ASSERT_GE(norm(x).sign(), 0);
    ASSERT_EQ(norm(x).is_zero(), is_zero(x));
    ASSERT_EQ(norm(scale(c, x)), abs(c) * norm(x));
    ASSERT_LE(norm(add(x, y)), norm(x) + norm(y));
    ASSERT_EQ(norm(abs(x)), norm(x));
    // Lattice norm: |x| <= |y| forces ||x|| <= ||y||.
    const Element small = meet(abs(x), abs(y));
    ASSERT_TRUE(leq(abs(small), abs(y)).is_true());
    ASSERT_LE(norm(small), norm(y));
    ASSERT_LE(abs(phi(x)), norm(x));
  }
}

TEST(LatticeProperty, PhiIsLatticeHomomorphism) {
  std::mt19937_64 rng(104);
  for (int i = 0; i < kInstances; ++i) {
    const Space s = random_base_rooted(rng);
    const Element x = random_base(s, rng), y = random_base(s, rng);
    const Rational c = random_rational(rng);
    ASSERT_EQ(phi(join(x, y)), max(phi(x), phi(y)));
    ASSERT_EQ(phi(meet(x, y)), min(phi(x), phi(y)));
    ASSERT_EQ(phi(add(scale(c, x), y)), c * phi(x) + phi(y));
  }
}

TEST(LatticeProperty, SuccessorMonotonicityWithEqualityCriterion) {
  std::mt19937_64 rng(105);
  int equalities = 0;
  for (int i = 0; i < kInstances; ++i) {
    const Space s = random_base_rooted(rng);
    const Element x = random_base(s, rng);
    const Rational here = norm(x), there = norm(x.restaged(s.next()));
    ASSERT_LE(there, here);
    ASSERT_EQ(there == here, here == abs(phi(x))) << x.str();
    equalities += there == here;
  }
  // Both sides of the criterion are exercised.
  EXPECT_GT(equalities, 1000);
  EXPECT_LT(equalities, kInstances - 1000);
}

TEST(LatticeProperty, SphereAbsorption) {
  std::mt19937_64 rng(106);
  for (int i = 0; i < kInstances; ++i) {
    const Space s = random_base_rooted(rng);
    const Element x = random_sphere_element(s, rng);
    ASSERT_TRUE(in_sphere_S(x)) << x.str();
    ASSERT_TRUE(in_sphere_S(x.restaged(s.next()))) << x.str();
  }
}

TEST(LatticeProperty, SuccessorNormRescaling) {
  std::mt19937_64 rng(107);
  for (int i = 0; i < 2000; ++i) {
    const Space s = random_base_rooted(rng);
    const Element x = random_sphere_element(s, rng), y = random_sphere_element(s, rng);
    const Report r = successor_norm_lemma_check(x, y);
    ASSERT_EQ(r.overall(), Verdict::kPass) << r.to_text();
  }
  EXPECT_THROW(successor_norm_lemma_check(one(Space::base()), scale(R(2), one(Space::base()))),
               PreconditionError);
  // (z_1 - z_2)^+ is the unit at coordinate 2.
  const Report zy = successor_norm_lemma_check(z_seq(Space::base(), 1), z_seq(Space::base(), 2));
  EXPECT_EQ(zy.find("rescale-positive-part")->evidence.at("inner"), "1/3");
  EXPECT_EQ(zy.find("rescale-positive-part")->evidence.at("outer"), "1/21");
  const Report zz = successor_norm_lemma_check(z_seq(Space::base(), 2), z_seq(Space::base(), 1));
  EXPECT_EQ(zz.find("rescale-positive-part")->evidence.at("outer"), "0");
}

TEST(LatticeProperty, NormBoundsAreSound) {
  std::mt19937_64 rng(108);
  const Space w(Ordinal::omega());
  for (int i = 0; i < 500; ++i) {
    std::vector<Element> xs;
    const std::size_t k = 1 + rng() % 4;
    for (std::uint64_t m = 1; m <= k; ++m) xs.push_back(random_base(w.child(m), rng));
    const Element x = Element::limit(w, xs, TailExpr::zero());
    Rational exact;
    for (std::uint64_t m = 1; m <= k; ++m) exact = max(exact, norm(xs[m - 1]));
    const NormBound b = norm_bounds(x);
    ASSERT_LE(b.lower, exact);
    ASSERT_LE(exact, b.upper);
    ASSERT_EQ(norm(x), exact);
    // Tail sampled against the family fact ||z_k|| = 1.
    const Element y = Element::limit(w, xs, TailExpr::zseq(2));
    const NormBound by = norm_bounds(y);
    ASSERT_EQ(by.lower, max(exact, R(1)));
    ASSERT_LE(by.lower, by.upper);
  }
}

TEST(LatticeProperty, ZSequenceDecreasesAtEveryStage) {
  for (const char* a : {"1", "2", "5", "w", "w+1", "w*2", "w^2"}) {
    const Space s(O(a));
    for (std::uint64_t n = 1; n <= 12; ++n) {
      ASSERT_TRUE(leq(z_seq(s, n + 1), z_seq(s, n)).is_true()) << a << " n=" << n;
      ASSERT_TRUE(in_sphere_S(z_seq(s, n))) << a;
    }
  }
}

}  // namespace
}  // namespace fatou
