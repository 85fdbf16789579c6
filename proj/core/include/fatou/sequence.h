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

#ifndef FATOU_SEQUENCE_H_
#define FATOU_SEQUENCE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fatou/element.h"
#include "fatou/rational.h"
#include "fatou/space.h"

namespace fatou {

// Polynomial with rational coefficients, lowest degree first.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients);
  static Polynomial constant(const Rational& c) { return Polynomial({c}); }
  // The identity n.
  static Polynomial identity() { return Polynomial({Rational(0), Rational(1)}); }

  bool is_zero() const { return coefficients_.empty(); }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  Rational leading() const;
  const std::vector<Rational>& coefficients() const { return coefficients_; }

  Rational operator()(const Rational& x) const;
  // Sign for all sufficiently large n.
  int eventual_sign() const { return is_zero() ? 0 : leading().sign(); }
  // Every integer n >= root_bound() has the eventual sign (Cauchy bound).
  std::uint64_t root_bound() const;
  // p(n + 1).
  Polynomial shifted() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

  std::string str() const;

 private:
  std::vector<Rational> coefficients_;
};

// Rational extended by +-infinity.
struct ExtRational {
  int infinite = 0;  // -1, 0 or +1
  Rational value;

  static ExtRational finite(Rational v) { return {0, std::move(v)}; }
  static ExtRational plus_infinity() { return {1, Rational()}; }
  static ExtRational minus_infinity() { return {-1, Rational()}; }
  bool is_finite() const { return infinite == 0; }
  std::string str() const;
  friend bool operator==(const ExtRational& a, const ExtRational& b);
  friend bool operator<(const ExtRational& a, const ExtRational& b);
};
ExtRational max(const ExtRational& a, const ExtRational& b);

// Closed interval of the extended line; missing endpoints are infinite.
struct Interval {
  bool empty = false;
  std::optional<Rational> lo;
  std::optional<Rational> hi;

  static Interval all() { return {}; }
  static Interval none() { return {true, std::nullopt, std::nullopt}; }
  bool contains(const Rational& c) const;
  Interval intersect(const Interval& other) const;
  std::string str() const;
};

// c(n) = p(n) / q(n) for integers n.
class RationalSequence {
 public:
  RationalSequence(Polynomial p, Polynomial q);
  Rational at(std::uint64_t n) const;
  ExtRational limit() const;
  // Eventual sign of c(n) - limit (0 when eventually equal). Finite limits.
  int approach_side() const;
  // From this index on, c(n) is monotone.
  std::uint64_t monotone_from(std::uint64_t start) const;
  bool eventually_in(const Interval& interval) const;
  // c(n) in interval for every n >= from.
  bool all_in(const Interval& interval, std::uint64_t from) const;

  const Polynomial& numerator() const { return p_; }
  const Polynomial& denominator() const { return q_; }

 private:
  Polynomial p_;
  Polynomial q_;
};

// |a + c b| <= bound, or (a + c b)^+ <= bound when positive_part is set.
struct AffineConstraint {
  Rational a;
  Rational b;
  Rational bound;
  bool positive_part = false;
};
Interval solve(const std::vector<AffineConstraint>& constraints);

// c -> max_i weight_i * |a_i + c b_i| (or the positive part): the norm of an
// affine family of base-rooted elements.
struct AffineTerm {
  Rational weight;
  Rational a;
  Rational b;
  bool positive_part = false;
};
class ConvexProfile {
 public:
  explicit ConvexProfile(std::vector<AffineTerm> terms) : terms_(std::move(terms)) {}
  Rational operator()(const Rational& c) const;
  // Limit as c -> +infinity (direction > 0) or -infinity.
  ExtRational at_infinity(int direction) const;
  ExtRational at(const ExtRational& c) const;

 private:
  std::vector<AffineTerm> terms_;
};

// Norm (or positive-part norm) of a + c b for base-rooted a, b.
ConvexProfile norm_profile(const Element& a, const Element& b, bool positive_part);

// Tail rules of a sequence specification.
struct ConstantTail {
  Element value;
};
// x_n = scale * z_{n + offset}.
struct ZTail {
  std::uint64_t offset = 0;
  Rational scale = Rational(1);
};
// x_n = base + (p(n) / q(n)) * direction.
struct FormulaTail {
  Element base;
  Element direction;
  Polynomial numerator;
  Polynomial denominator;
};
using TailRule = std::variant<ConstantTail, ZTail, FormulaTail>;

// A sequence x_1, x_2, ... given by explicit terms 1..K and a tail rule for
// n > K.
class SequenceSpec {
 public:
  SequenceSpec(Space space, std::vector<Element> explicit_terms, TailRule rule);
  // The canonical (z_n) of a constructed stage.
  static SequenceSpec canonical_z(const Space& space);
  static SequenceSpec constant(const Element& value);
  // x_n = (p(n)/q(n)) * u.
  static SequenceSpec scaled(const Element& u, Polynomial p, Polynomial q);

  const Space& space() const { return space_; }
  const std::vector<Element>& explicit_terms() const { return explicit_; }
  std::uint64_t num_explicit() const { return explicit_.size(); }
  const TailRule& rule() const { return rule_; }
  bool is_canonical_z() const;

  Element term(std::uint64_t n) const;
  // Exact decisions below need a base-rooted space.
  bool decidable() const { return space_.base_rooted(); }

  std::string str() const;

 private:
  Space space_;
  std::vector<Element> explicit_;
  TailRule rule_;
};

// A predicate on single terms together with its shape on affine families.
struct TermPredicate {
  std::function<bool(const Element&)> holds;
  // {c : predicate(base + c * direction)}; convexity makes this an interval.
  std::function<Interval(const Element& base, const Element& direction)> region;
  // Fixed elements the predicate looks at (for z-tail stabilization).
  std::vector<Element> involved;
};

// A convex functional on single terms (a norm of an affine expression).
struct TermFunctional {
  std::function<Rational(const Element&)> value;
  std::function<ConvexProfile(const Element& base, const Element& direction)> profile;
  std::vector<Element> involved;
};

// First index from which every z-tail term has the same coordinate pattern
// relative to `involved`; beyond it all coordinatewise quantities are
// constant in n.
std::uint64_t stable_index(const SequenceSpec& seq, const std::vector<Element>& involved);

bool holds_for_all(const SequenceSpec& seq, const TermPredicate& pred,
                   std::uint64_t from = 1);
bool holds_eventually(const SequenceSpec& seq, const TermPredicate& pred);
// Least n in [from, limit] where the predicate fails.
std::optional<std::uint64_t> first_failure(const SequenceSpec& seq,
                                           const TermPredicate& pred,
                                           std::uint64_t from, std::uint64_t limit);

// sup_{n >= from} value(x_n) and lim_n value(x_n), exactly.
ExtRational sup_from(const SequenceSpec& seq, const TermFunctional& f,
                     std::uint64_t from = 1);
ExtRational limit_value(const SequenceSpec& seq, const TermFunctional& f);

// Ready-made predicates and functionals (base-rooted).
TermPredicate pred_geq(const Element& y);         // y <= x
TermPredicate pred_leq(const Element& y);         // x <= y
TermPredicate pred_abs_diff_leq(const Element& x, const Element& v);  // |term - x| <= v
TermPredicate pred_nonnegative(const Space& space);
TermFunctional fn_norm_of_diff(const Element& x);      // ||term - x||
TermFunctional fn_pos_excess(const Element& y);        // ||(y - term)^+||
TermFunctional fn_sup_norm_of_diff(const Element& x);  // ||term - x||_inf
TermFunctional fn_abs_phi_of_diff(const Element& x);   // |phi(term - x)|

// Monotonicity of the whole sequence (n >= 1), decided exactly.
bool is_decreasing(const SequenceSpec& seq);
bool is_increasing(const SequenceSpec& seq);
// Every term >= 0 and nonzero.
bool all_strictly_positive(const SequenceSpec& seq);

void to_json(nlohmann::json& j, const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const SequenceSpec& s);
SequenceSpec sequence_from_json(const nlohmann::json& j);

}  // namespace fatou

#endif  // FATOU_SEQUENCE_H_
