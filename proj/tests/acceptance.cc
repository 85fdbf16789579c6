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

// Acceptance run: one PASS/FAIL line per criterion.  Exit status is 0 iff
// the failing set equals --known-deviations.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fatou/construction.h"
#include "fatou/convergence.h"
#include "fatou/families.h"
#include "fatou/game.h"
#include "fatou/psi.h"
#include "oracle.h"

namespace fatou {
namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

Rational R(long p, long q = 1) { return Rational(p, q); }
Ordinal F(std::uint64_t n) { return Ordinal::finite(n); }

const Space kBase = Space::base();

#define EXPECT_OR_FAIL(cond, msg)      \
  do {                                 \
    if (!(cond)) {                     \
      std::ostringstream os_;          \
      os_ << msg;                      \
      return Outcome{false, os_.str()}; \
    }                                  \
  } while (0)

std::vector<Element> positive_diagonal_pool(std::size_t size) {
  DiagonalRationalSet dense(kBase);
  std::vector<Element> pool;
  for (std::uint64_t i = 1; pool.size() < size; ++i) {
    if (is_strictly_positive(dense.at(i)).is_true()) pool.push_back(dense.at(i));
  }
  return pool;
}

Element random_positive(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(0, 4), num(0, 8), den(1, 4), tail(1, 8);
  std::vector<Rational> prefix(len(rng));
  for (auto& v : prefix) v = R(num(rng), den(rng));
  return Element::base(kBase, prefix, R(tail(rng), den(rng)));
}

Rational random_rational(std::mt19937_64& rng) {
  return R(static_cast<long>(rng() % 19) - 9, static_cast<long>(rng() % 6) + 1);
}

Element random_base(const Space& s, std::mt19937_64& rng) {
  std::vector<Rational> prefix(rng() % 6);
  for (auto& r : prefix) r = random_rational(rng);
  return Element::base(s, std::move(prefix), random_rational(rng));
}

// Decaying z_n = u * p(n) / q(n) with p constant.
SequenceSpec random_decaying(std::mt19937_64& rng) {
  const Element u = random_positive(rng);
  const long c = 1 + static_cast<long>(rng() % 4);
  std::vector<Rational> q = {R(static_cast<long>(rng() % 3)), R(1 + static_cast<long>(rng() % 3))};
  if (rng() % 2) q.push_back(R(1));
  return SequenceSpec::scaled(u, Polynomial::constant(R(c)), Polynomial(q));
}

Outcome criterion1() {
  const BundlePtr b = build(F(1));
  for (std::uint64_t n = 1; n <= 64; ++n) {
    const Element zn = b->z.term(n);
    EXPECT_OR_FAIL(norm(zn) == R(1) && phi(zn) == R(1), "n = " << n << ": norm " << norm(zn).str());
    EXPECT_OR_FAIL(oracle::norm_at_height(oracle::from(zn), 0) == oracle::Frac(1),
                   "oracle norm differs at n = " << n);
  }
  const FiniteTree& t = b->witness->finite();
  const Ordinal rank = finite_rank(t);
  EXPECT_OR_FAIL(rank == F(2), "rank " << rank.str());
  EXPECT_OR_FAIL(oracle::literal_rank(t.nodes()) == 2, "literal rank differs");
  return {true, "||z_n|| = phi(z_n) = 1 for n <= 64, rank(T_1) = 2"};
}

Outcome criterion2() {
  const BundlePtr b = build(F(2));
  const Report r = verify(*b, Budgets{64, 4, 4});
  const ReportItem* f = r.find("f.successor-chain");
  EXPECT_OR_FAIL(f && f->status == Verdict::kPass, (f ? f->detail : "no successor item"));
  EXPECT_OR_FAIL(f->detail.rfind("exact", 0) == 0, "not exact: " << f->detail);
  const oracle::Seq z1 = oracle::z(1);
  for (std::uint64_t n = 1; n <= 64; ++n) {
    const oracle::Seq d = oracle::zip(z1, oracle::z(n), [](oracle::Frac a, oracle::Frac c) {
      return oracle::fmax(a - c, oracle::Frac(0));
    });
    const oracle::Frac outer = oracle::norm_at_height(d, 1);
    const oracle::Frac inner = oracle::norm_at_height(d, 0);
    EXPECT_OR_FAIL(outer == inner / oracle::Frac(7) && outer <= oracle::Frac(1, 7),
                   "oracle chain breaks at n = " << n);
    const auto& v = f->evidence.at("values").at(n - 1);
    EXPECT_OR_FAIL(v.at("outer").get<std::string>() == outer.str() &&
                       v.at("inner_over_7").get<std::string>() == (inner / oracle::Frac(7)).str(),
                   "n = " << n << ": verifier " << v.dump() << ", oracle " << outer.str());
  }
  const oracle::Seq y1 = oracle::from(witness_label(F(1), {Ordinal()}));
  const oracle::Seq diff = oracle::zip(y1, z1, [](oracle::Frac a, oracle::Frac c) { return a - c; });
  const oracle::Frac link = oracle::norm_at_height(diff, 1);
  EXPECT_OR_FAIL(f->evidence.at("link").get<std::string>() == link.str(),
                 "link " << f->evidence.at("link") << " vs oracle " << link.str());
  EXPECT_OR_FAIL(link <= oracle::Frac(2, 7) && oracle::Frac(2, 7) < oracle::Frac(1, 3),
                 "link chain fails");
  return {true, "max excess " + f->evidence.at("max_excess").get<std::string>() +
                    " <= 1/7 < 1/3, ||y_1 - z_1|| = " + link.str() + " <= 2/7 < 1/3"};
}

Outcome criterion3() {
  for (std::uint64_t a = 1; a <= 6; ++a) {
    const BundlePtr b = build(F(a));
    const Ordinal cert = structured_rank(*b->witness);
    const FiniteTree full = truncate(*b->witness, a + 2, 1);
    const Ordinal brute = finite_rank(full);
    EXPECT_OR_FAIL(cert == F(a + 1), "alpha " << a << ": certificate " << cert.str());
    EXPECT_OR_FAIL(brute == cert, "alpha " << a << ": explicit rank " << brute.str());
    EXPECT_OR_FAIL(oracle::literal_rank(full.nodes()) == a + 1, "alpha " << a << ": literal rank");
  }
  return {true, "structured = explicit = alpha + 1 for alpha <= 6"};
}

Outcome criterion4() {
  const Report r = verify(*build(Ordinal::omega()), Budgets{32, 16, 6});
  for (const auto& item : r.items()) {
    EXPECT_OR_FAIL(item.status == Verdict::kPass, item.name << ": " << item.detail);
  }
  const ReportItem* e = r.find("e.rank");
  EXPECT_OR_FAIL(e != nullptr, "no rank item");
  const auto& corr = e->evidence.at("corroboration");
  EXPECT_OR_FAIL(corr.size() == 8, "corroboration size " << corr.size());
  for (std::uint64_t c = 1; c <= 8; ++c) {
    const Ordinal tr = corr.at(c - 1).at("rank").get<Ordinal>();
    EXPECT_OR_FAIL(tr >= F(c), "truncation with " << c << " components has rank " << tr.str());
  }
  return {true, e->detail};
}

SequenceSpec planted(const Element& y) {
  return SequenceSpec(kBase, {},
                      FormulaTail{y, one(kBase), Polynomial::constant(R(1)), Polynomial::identity()});
}

Outcome criterion5() {
  const Element half = Element::constant(kBase, R(1, 2));
  const std::vector<SequenceSpec> zs = {SequenceSpec::canonical_z(kBase), planted(half)};
  const std::vector<std::vector<Element>> pools = {
      {one(kBase)},
      {one(kBase), Element::constant(kBase, R(2))},
      {half},
      {Element::base(kBase, {R(1)}, R(1, 2)), half},
      {Element::base(kBase, {R(3, 4)}, R(1, 2)), Element::base(kBase, {R(5, 8)}, R(1, 2)),
       Element::base(kBase, {R(9, 16)}, R(1, 2))},
      {z_seq(kBase, 1), z_seq(kBase, 2), one(kBase), Element::constant(kBase, R(3))},
  };
  int instances = 0, ii_wins = 0;
  for (const auto& z : zs) {
    for (const auto& pool : pools) {
      for (std::uint64_t a = 1; a <= 4; ++a) {
        const SolveResult r = exhaustive_solve(F(a), z, pool);
        EXPECT_OR_FAIL(r.i_can_force != r.ii_can_force, "determinacy fails at alpha " << a);
        const Ordinal rank = finite_rank(pool_psi_tree(z, pool, a + 1));
        EXPECT_OR_FAIL((r.winner == Winner::kII) == (rank > F(a)),
                       "alpha " << a << ", rank " << rank.str() << ", winner "
                                << winner_name(r.winner));
        ++instances;
        ii_wins += r.winner == Winner::kII;
      }
    }
  }
  return {true, std::to_string(instances) + " instances agree (" + std::to_string(ii_wins) +
                    " won by II)"};
}

Outcome criterion6() {
  std::mt19937_64 rng(20260106);
  const DyadicGridSet grid(kBase);
  for (int t = 0; t < 50; ++t) {
    const Element y = random_positive(rng);
    const Element u = random_positive(rng);
    const SequenceSpec z(kBase, {},
                         FormulaTail{y, u, Polynomial::constant(R(1)), Polynomial::identity()});
    const std::vector<Element> branch = lower_bound_to_branch(y, grid, 5);
    EXPECT_OR_FAIL(branch.size() == 5, "branch length " << branch.size());
    const PsiVerdict v = psi_check(z, branch);
    EXPECT_OR_FAIL(!v.refuted(), "planted " << y.str() << ": " << v.str());
    const LowerBoundEstimate est = branch_to_lower_bound(branch, 5);
    EXPECT_OR_FAIL(norm(sub(est.y, y)) <= est.error,
                   "estimate error " << norm(sub(est.y, y)).str() << " > " << est.error.str());
  }
  const std::vector<Element> pool = positive_diagonal_pool(60);
  std::uint64_t nodes = 0;
  for (int t = 0; t < 50; ++t) {
    const SequenceSpec z = t == 0 ? SequenceSpec::canonical_z(kBase) : random_decaying(rng);
    const PoolSearchResult r = pool_psi_search(z, pool, 12);
    EXPECT_OR_FAIL(r.terminated && !r.certificate, "search on " << z.str() << " found a certificate");
    nodes += r.nodes;
  }
  return {true, "50 planted round trips, 50 infimum-zero searches (" + std::to_string(nodes) +
                    " nodes)"};
}

Outcome criterion7() {
  std::mt19937_64 rng(20260107);
  const std::vector<Element> pool = positive_diagonal_pool(200);
  std::vector<SequenceSpec> corpus;
  for (int i = 0; i < 8; ++i) corpus.push_back(random_decaying(rng));
  int plays = 0;
  for (const auto& z : corpus) {
    EXPECT_OR_FAIL(x_down0_check(z).overall() == Verdict::kPass, z.str() << " is not in X_down0");
    for (const auto& y : pool) {
      const Transcript t = play(F(1), z, *fatou_strategy(), *scripted_replies({y}));
      EXPECT_OR_FAIL(t.winner == Winner::kI && t.verdict && t.verdict->refuted() &&
                         t.verdict->n && *t.verdict->n <= 64,
                     "reply " << y.str() << " to " << z.str() << ": " << t.reason);
      ++plays;
    }
  }
  return {true, std::to_string(plays) + " replies refuted with n <= 64"};
}

Outcome criterion8() {
  constexpr int kN = 10000;
  std::mt19937_64 rng(20260108);
  auto space = [&] { return Space(F(1 + rng() % 5)); };
  for (int i = 0; i < kN; ++i) {
    const Space s = space();
    const Element x = random_base(s, rng), y = random_base(s, rng);
    const Element lhs = pos_part(sub(y, x));
    EXPECT_OR_FAIL(lhs == sub(y, meet(x, y)), "positive-part identity fails for " << x.str());
    const auto expect = oracle::zip(oracle::from(y), oracle::from(x), [](oracle::Frac b, oracle::Frac a) {
      return oracle::fmax(b - a, oracle::Frac(0));
    });
    const auto got = oracle::from(lhs);
    for (std::size_t j = 1; j <= expect.len() + 1; ++j) {
      EXPECT_OR_FAIL(got.at(j) == expect.at(j), "positive-part identity differs from oracle");
    }
  }
  for (int i = 0; i < kN; ++i) {
    const Space s = space();
    const Element x = random_base(s, rng), y = random_base(s, rng);
    const Rational c = random_rational(rng);
    const unsigned h = static_cast<unsigned>(s.height());
    EXPECT_OR_FAIL(oracle::same(norm(x), oracle::norm_at_height(oracle::from(x), h)),
                   "norm formula " << x.str());
    EXPECT_OR_FAIL(norm(x).sign() >= 0 && norm(x).is_zero() == is_zero(x), "definiteness");
    EXPECT_OR_FAIL(norm(scale(c, x)) == abs(c) * norm(x), "homogeneity");
    EXPECT_OR_FAIL(norm(add(x, y)) <= norm(x) + norm(y), "triangle inequality");
    EXPECT_OR_FAIL(norm(abs(x)) == norm(x), "|x| norm");
    EXPECT_OR_FAIL(norm(meet(abs(x), abs(y))) <= norm(y), "lattice norm");
  }
  int equalities = 0;
  for (int i = 0; i < kN; ++i) {
    const Space s = space();
    const Element x = random_base(s, rng);
    const Rational here = norm(x), there = norm(x.restaged(s.next()));
    EXPECT_OR_FAIL(there <= here, "successor norm grew for " << x.str());
    EXPECT_OR_FAIL((there == here) == (here == abs(phi(x))), "equality criterion " << x.str());
    equalities += there == here;
  }
  for (int i = 0; i < kN; ++i) {
    const Space s = space();
    const Element x = random_sphere_element(s, rng);
    EXPECT_OR_FAIL(in_sphere_S(x) && in_sphere_S(x.restaged(s.next())), "absorption " << x.str());
  }
  return {true, "4 x 10000 instances, " + std::to_string(equalities) + " norm equalities"};
}

Outcome criterion9() {
  const SequenceSpec z = SequenceSpec::canonical_z(kBase);
  EXPECT_OR_FAIL(x_down0_check(z, ConvBudgets{64, 64}).overall() == Verdict::kPass,
                 "x_down0_check rejects z");
  std::mt19937_64 rng(20260109);
  for (int i = 0; i < 100; ++i) {
    const Element u = random_positive(rng);
    const Report r = x_down0_check(SequenceSpec::constant(u), ConvBudgets{64, 64});
    const ReportItem* it = r.find("basis");
    EXPECT_OR_FAIL(r.overall() == Verdict::kFail && it && it->evidence.contains("b_m"),
                   "constant " << u.str() << " not rejected with a witness");
    const Element bm = element_from_json(it->evidence.at("b_m"));
    EXPECT_OR_FAIL(leq(bm, u).is_true() && is_strictly_positive(bm).is_true(),
                   "witness does not re-verify");
  }
  int uniform_cases = 0;
  for (int i = 0; i < 100; ++i) {
    const Element u = random_positive(rng), x = random_positive(rng);
    SequenceSpec seq = SequenceSpec::constant(x);
    Element target = x;
    if (i % 3 == 0) {
      seq = random_decaying(rng);
      target = Element::zero(kBase);
    } else if (i % 3 == 1) {
      seq = SequenceSpec(kBase, {}, FormulaTail{x, u, Polynomial::constant(R(1)), Polynomial::identity()});
    }
    const Report r = uniform_conv_check(seq, target, {R(1, 2), R(1, 20), R(1, 200)});
    EXPECT_OR_FAIL(r.overall() == Verdict::kPass, seq.str() << " not uniform");
    const auto w = derived_sigma_witness(seq, target);
    EXPECT_OR_FAIL(w && sigma_order_witness_check(seq, target, *w).overall() == Verdict::kPass,
                   "implication fails for " << seq.str());
    ++uniform_cases;
  }
  const Report nu = uniform_conv_check(z, Element::zero(kBase), {R(1, 2)});
  const ReportItem* tail = nu.find("tail");
  EXPECT_OR_FAIL(nu.overall() == Verdict::kFail && tail, "z judged uniform");
  // ||z_k v ... v z_m|| = ||z_k||, computed independently.
  const oracle::Frac obstruction = oracle::norm_at_height(oracle::z(1), 0);
  const std::string got = tail->evidence.at("limit").get<std::string>();
  EXPECT_OR_FAIL(got == obstruction.str(), "verifier obstruction " << got << ", oracle " << obstruction.str());
  EXPECT_OR_FAIL(got == "1/3",
                 "z judged non-uniform; x_down0 and " << uniform_cases
                     << " implications hold; obstruction is " << got << " (weighted sup part "
                     << tail->evidence.at("weighted_sup_part").get<std::string>()
                     << ", functional part " << tail->evidence.at("phi_part").get<std::string>()
                     << "), not 1/3");
  return {true, "obstruction 1/3"};
}

}  // namespace
}  // namespace fatou

int main(int argc, char** argv) {
  CLI::App app("acceptance criteria");
  std::vector<int> known;
  std::vector<int> only;
  app.add_option("--known-deviations", known, "criteria expected to fail")->delimiter(',');
  app.add_option("--only", only, "run a subset")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<fatou::Outcome()>> criteria = {
      fatou::criterion1, fatou::criterion2, fatou::criterion3, fatou::criterion4, fatou::criterion5,
      fatou::criterion6, fatou::criterion7, fatou::criterion8, fatou::criterion9};
  const double limits[] = {1, 0, 5, 30, 0, 0, 0, 0, 0};
  std::set<int> failed;
  for (int i = 1; i <= 9; ++i) {
    if (!only.empty() && std::find(only.begin(), only.end(), i) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    fatou::Outcome o;
    try {
      o = criteria[i - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && limits[i - 1] > 0 && secs > limits[i - 1]) {
      o = {false, "too slow: limit " + std::to_string(limits[i - 1]) + " s"};
    }
    if (!o.ok) failed.insert(i);
    std::printf("criterion %d: %s (%.2f s) %s\n", i, o.ok ? "PASS" : "FAIL", secs, o.detail.c_str());
  }
  std::set<int> expected;
  for (int k : known) {
    if (only.empty() || std::find(only.begin(), only.end(), k) != only.end()) expected.insert(k);
  }
  if (!expected.empty()) {
    std::printf("known deviations:");
    for (int k : expected) std::printf(" %d", k);
    std::printf("\n");
  }
  return failed == expected ? 0 : 1;
}
