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

#include "fatou/convergence.h"
#include "fatou/families.h"
#include "oracle.h"

namespace fatou {
namespace {

Rational R(long p, long q = 1) { return Rational(p, q); }

const Space kBase = Space::base();

Polynomial P(std::vector<long> c) {
  std::vector<Rational> out;
  for (long v : c) out.push_back(R(v));
  return Polynomial(out);
}

Element base_elem(std::vector<Rational> prefix, Rational tail) {
  return Element::base(kBase, std::move(prefix), std::move(tail));
}

// Strictly positive base element with small entries.
Element random_positive(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(0, 4), num(1, 9), den(1, 5);
  std::vector<Rational> prefix(len(rng));
  for (auto& v : prefix) v = R(num(rng), den(rng));
  return base_elem(prefix, R(num(rng), den(rng)));
}

oracle::Frac base_norm(const Element& x) {
  return oracle::norm_at_height(oracle::from(x), 0);
}

TEST(Uniform, ConstantSequence) {
  const Element x = base_elem({R(2), R(-1)}, R(1, 2));
  const Report r = uniform_conv_check(SequenceSpec::constant(x), x, {R(1), R(1, 10), R(1, 1000)});
  EXPECT_EQ(r.overall(), Verdict::kPass) << r.to_text();
  for (const char* e : {"eps=1", "eps=1/10", "eps=1/1000"}) {
    EXPECT_EQ(r.find(e)->evidence.at("k"), 1) << e;
  }
}

TEST(Uniform, ScaledElementMatchesNormOverEps) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 40; ++i) {
    const Element u = random_positive(rng);
    const SequenceSpec seq = SequenceSpec::scaled(u, P({1}), P({0, 1}));
    const oracle::Frac nu = base_norm(u);
    for (const Rational& e : {R(1, 2), R(1, 7), R(1, 100)}) {
      const Report r = uniform_conv_check(seq, Element::zero(kBase), {e});
      const ReportItem* it = r.find("eps=" + e.str());
      ASSERT_NE(it, nullptr);
      ASSERT_EQ(it->status, Verdict::kPass);
      // sup_{n >= k} ||u/n|| = ||u||/k < eps, least such k.
      const oracle::Frac q = nu / oracle::from(e);
      const std::uint64_t k = static_cast<std::uint64_t>(q.p / q.q) + 1;
      EXPECT_EQ(it->evidence.at("k").get<std::uint64_t>(), k) << u.str() << " eps " << e.str();
      EXPECT_EQ(r.find("tail")->status, Verdict::kPass);
    }
  }
}

TEST(Uniform, CanonicalZIsNotUniform) {
  const SequenceSpec z = SequenceSpec::canonical_z(kBase);
  const Element zero = Element::zero(kBase);
  const Report r = uniform_conv_check(z, zero, {R(1, 2), R(1, 4)});
  EXPECT_EQ(r.overall(), Verdict::kFail);
  EXPECT_EQ(r.find("eps=1/2")->status, Verdict::kFail);
  const ReportItem* tail = r.find("tail");
  ASSERT_NE(tail, nullptr);
  EXPECT_EQ(tail->status, Verdict::kFail);
  // ||z_k v ... v z_m|| = ||z_k||: weighted sup 1/3, functional part 1.
  EXPECT_EQ(tail->evidence.at("weighted_sup_part"), "1/3");
  EXPECT_EQ(tail->evidence.at("phi_part"), "1");
  EXPECT_EQ(tail->evidence.at("limit"), "1");
  for (std::uint64_t k = 1; k <= 64; k *= 2) {
    const ExtRational s = join_norm_tail(z, zero, k);
    ASSERT_TRUE(s.is_finite());
    EXPECT_GE(s.value, R(1, 3));
    EXPECT_EQ(s.value, R(1));
  }
}

TEST(Uniform, NonBaseSpaceIsUnknown) {
  const Space s(Ordinal::omega());
  const Report r = uniform_conv_check(SequenceSpec::canonical_z(s), Element::zero(s), {R(1, 2)});
  EXPECT_EQ(r.overall(), Verdict::kUnknown);
}

TEST(Sigma, Examples) {
  const SequenceSpec z = SequenceSpec::canonical_z(kBase);
  const Element zero = Element::zero(kBase);
  const Report a = sigma_order_witness_check(z, zero, z);
  EXPECT_EQ(a.overall(), Verdict::kPass) << a.to_text();

  const Element x = base_elem({R(1)}, R(3));
  const Report b = sigma_order_witness_check(SequenceSpec::constant(x), x, z);
  EXPECT_EQ(b.overall(), Verdict::kPass) << b.to_text();

  const SequenceSpec growing = SequenceSpec::scaled(one(kBase), P({0, 1}), P({1}));
  const Report c = sigma_order_witness_check(z, zero, growing);
  EXPECT_EQ(c.overall(), Verdict::kFail);
  EXPECT_EQ(c.find("witness-decreasing")->status, Verdict::kFail);
  EXPECT_EQ(c.find("domination"), nullptr);
}

TEST(Sigma, DominationFailureCarriesIndex) {
  // 1/n * one is not dominated by 1/(2n) * one.
  const SequenceSpec seq = SequenceSpec::scaled(one(kBase), P({1}), P({0, 1}));
  const SequenceSpec w = SequenceSpec::scaled(one(kBase), P({1}), P({0, 2}));
  const Report r = sigma_order_witness_check(seq, Element::zero(kBase), w);
  EXPECT_EQ(r.overall(), Verdict::kPass) << r.to_text();
  const SequenceSpec flat = SequenceSpec::constant(one(kBase));
  const Report f = sigma_order_witness_check(flat, Element::zero(kBase), w);
  EXPECT_EQ(f.find("domination")->status, Verdict::kFail);
  EXPECT_EQ(f.find("domination")->evidence.at("m"), 1);
}

TEST(Down0, CanonicalZPasses) {
  const SequenceSpec z = SequenceSpec::canonical_z(kBase);
  const Report r = x_down0_check(z);
  EXPECT_EQ(r.overall(), Verdict::kPass) << r.to_text();
  // Cross-check every reported witness: b_m <= z_n is false.
  for (const auto& w : r.find("basis")->evidence.at("witnesses")) {
    const std::uint64_t m = w.at("m"), n = w.at("n");
    const oracle::Seq b = oracle::from(pi_basis(kBase, m));
    const oracle::Seq zn = oracle::z(n);
    bool below = true;
    const std::size_t len = std::max(b.len(), zn.len()) + 1;
    for (std::size_t j = 1; j <= len; ++j) below = below && b.at(j) <= zn.at(j);
    EXPECT_FALSE(below) << "m = " << m << ", n = " << n;
  }
}

TEST(Down0, ConstantPositiveSequencesFail) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 60; ++i) {
    const Element u = random_positive(rng);
    const Report r = x_down0_check(SequenceSpec::constant(u), ConvBudgets{64, 64});
    ASSERT_EQ(r.overall(), Verdict::kFail) << u.str() << "\n" << r.to_text();
    const ReportItem* it = r.find("basis");
    ASSERT_NE(it, nullptr);
    const Element bm = element_from_json(it->evidence.at("b_m"));
    EXPECT_TRUE(leq(bm, u).is_true());
    EXPECT_TRUE(is_strictly_positive(bm).is_true());
  }
}

TEST(Down0, Rejections) {
  const SequenceSpec up = SequenceSpec::scaled(one(kBase), P({0, 1}), P({1}));
  EXPECT_EQ(x_down0_check(up).find("decreasing")->status, Verdict::kFail);
  const SequenceSpec zero = SequenceSpec::constant(Element::zero(kBase));
  EXPECT_EQ(x_down0_check(zero).find("positive")->status, Verdict::kFail);
}

TEST(UpUnbounded, Examples) {
  const SequenceSpec nu = SequenceSpec::scaled(base_elem({R(2)}, R(1)), P({0, 1}), P({1}));
  const Report r = x_up_unbounded_check(nu, ConvBudgets{64, 16});
  EXPECT_EQ(r.overall(), Verdict::kPass) << r.to_text();
  for (const auto& w : r.find("dominating")->evidence.at("witnesses")) {
    const std::uint64_t m = w.at("m"), n = w.at("n");
    EXPECT_FALSE(leq(nu.term(n), scale(Rational(static_cast<long>(m)), one(kBase))).is_true());
  }
  const Report b = x_up_unbounded_check(SequenceSpec::constant(one(kBase)));
  EXPECT_EQ(b.overall(), Verdict::kFail);
  EXPECT_EQ(b.find("dominating")->evidence.at("m"), 1);
  const SequenceSpec down = SequenceSpec::scaled(one(kBase), P({1}), P({0, 1}));
  EXPECT_EQ(x_up_unbounded_check(down).find("increasing")->status, Verdict::kFail);
}

TEST(Down0ByNorm, Examples) {
  const SequenceSpec inv = SequenceSpec::scaled(one(kBase), P({1}), P({0, 1}));
  EXPECT_EQ(down0_by_norm_check(inv, true).overall(), Verdict::kPass);
  EXPECT_EQ(down0_by_norm_check(inv, false).overall(), Verdict::kUnknown);
  const Report z = down0_by_norm_check(SequenceSpec::canonical_z(kBase), true);
  EXPECT_EQ(z.overall(), Verdict::kFail);
  EXPECT_EQ(z.find("norm-limit")->evidence.at("limit"), "1");
  EXPECT_EQ(down0_by_norm_check(SequenceSpec::constant(Element::zero(kBase)), false).overall(),
            Verdict::kPass);
}

// Every uniformly convergent case yields a sigma-order witness u/m.
TEST(Implication, UniformGivesSigmaWitness) {
  std::mt19937_64 rng(13);
  int uniform_cases = 0;
  for (int i = 0; i < 120; ++i) {
    const Element u = random_positive(rng);
    const Element x = (i % 3 == 0) ? Element::zero(kBase) : random_positive(rng);
    SequenceSpec seq = SequenceSpec::constant(x);
    switch (i % 4) {
      case 0: seq = SequenceSpec::scaled(u, P({1}), P({0, 1})); break;
      case 1: seq = SequenceSpec::scaled(u, P({3}), P({1, 0, 2})); break;
      case 2:
        seq = SequenceSpec(kBase, {},
                           FormulaTail{x, u, P({1, 1}), P({0, 0, 1})});
        break;
      default: break;
    }
    const Element target = (i % 4 == 0 || i % 4 == 1) ? Element::zero(kBase) : x;
    const Report r = uniform_conv_check(seq, target, {R(1, 2), R(1, 20), R(1, 200)});
    if (r.overall() != Verdict::kPass) continue;
    ++uniform_cases;
    const auto witness = derived_sigma_witness(seq, target);
    ASSERT_TRUE(witness.has_value()) << seq.str();
    const Report s = sigma_order_witness_check(seq, target, *witness);
    EXPECT_EQ(s.overall(), Verdict::kPass) << seq.str() << "\n" << s.to_text();
  }
  EXPECT_EQ(uniform_cases, 120);
}

}  // namespace
}  // namespace fatou
