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

#include "fatou/sequence.h"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fatou/errors.h"
#include "fatou/families.h"

namespace fatou {

namespace {

// Explicit scans beyond this many indices are refused.
constexpr std::uint64_t kScanCap = 2'000'000;

void check_scan(std::uint64_t from, std::uint64_t to) {
  if (to > from && to - from > kScanCap) {
    throw BudgetExhausted("exact decision needs a scan of " +
                          std::to_string(to - from) + " indices");
  }
}

}  // namespace

// --- Polynomial -------------------------------------------------------------

Polynomial::Polynomial(std::vector<Rational> coefficients)
    : coefficients_(std::move(coefficients)) {
  while (!coefficients_.empty() && coefficients_.back().is_zero()) {
    coefficients_.pop_back();
  }
}

Rational Polynomial::leading() const {
  return is_zero() ? Rational(0) : coefficients_.back();
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational out;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    out = out * x + *it;
  }
  return out;
}

std::uint64_t Polynomial::root_bound() const {
  if (degree() <= 0) return 0;
  const Rational lead = abs(leading());
  Rational m;
  for (int i = 0; i < degree(); ++i) m = max(m, abs(coefficients_[i]) / lead);
  const mpz_class bound = (m + Rational(1)).floor() + 1;
  if (bound > mpz_class(static_cast<unsigned long>(kScanCap) * 1000UL)) {
    throw BudgetExhausted("polynomial root bound too large: " + str());
  }
  return bound.get_ui();
}

Polynomial Polynomial::shifted() const {
  // Horner in (x + 1).
  Polynomial out;
  const Polynomial x_plus_one({Rational(1), Rational(1)});
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    out = out * x_plus_one + Polynomial::constant(*it);
  }
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> out(std::max(a.coefficients_.size(), b.coefficients_.size()));
  for (std::size_t i = 0; i < a.coefficients_.size(); ++i) out[i] += a.coefficients_[i];
  for (std::size_t i = 0; i < b.coefficients_.size(); ++i) out[i] += b.coefficients_[i];
  return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> out(std::max(a.coefficients_.size(), b.coefficients_.size()));
  for (std::size_t i = 0; i < a.coefficients_.size(); ++i) out[i] += a.coefficients_[i];
  for (std::size_t i = 0; i < b.coefficients_.size(); ++i) out[i] -= b.coefficients_[i];
  return Polynomial(std::move(out));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  std::vector<Rational> out(a.coefficients_.size() + b.coefficients_.size() - 1);
  for (std::size_t i = 0; i < a.coefficients_.size(); ++i) {
    for (std::size_t j = 0; j < b.coefficients_.size(); ++j) {
      out[i + j] += a.coefficients_[i] * b.coefficients_[j];
    }
  }
  return Polynomial(std::move(out));
}

std::string Polynomial::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    if (coefficients_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << coefficients_[i];
    if (i >= 1) os << "*n";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

// --- ExtRational / Interval -------------------------------------------------

std::string ExtRational::str() const {
  if (infinite > 0) return "+inf";
  if (infinite < 0) return "-inf";
  return value.str();
}

bool operator==(const ExtRational& a, const ExtRational& b) {
  if (a.infinite != b.infinite) return false;
  return a.infinite != 0 || a.value == b.value;
}

bool operator<(const ExtRational& a, const ExtRational& b) {
  if (a.infinite != b.infinite) return a.infinite < b.infinite;
  if (a.infinite != 0) return false;
  return a.value < b.value;
}

ExtRational max(const ExtRational& a, const ExtRational& b) { return a < b ? b : a; }

bool Interval::contains(const Rational& c) const {
  if (empty) return false;
  if (lo && c < *lo) return false;
  if (hi && c > *hi) return false;
  return true;
}

Interval Interval::intersect(const Interval& o) const {
  if (empty || o.empty) return none();
  Interval out;
  out.lo = lo;
  if (o.lo && (!out.lo || *o.lo > *out.lo)) out.lo = o.lo;
  out.hi = hi;
  if (o.hi && (!out.hi || *o.hi < *out.hi)) out.hi = o.hi;
  if (out.lo && out.hi && *out.lo > *out.hi) return none();
  return out;
}

std::string Interval::str() const {
  if (empty) return "{}";
  return "[" + (lo ? lo->str() : std::string("-inf")) + ", " +
         (hi ? hi->str() : std::string("+inf")) + "]";
}

// --- RationalSequence -------------------------------------------------------

RationalSequence::RationalSequence(Polynomial p, Polynomial q)
    : p_(std::move(p)), q_(std::move(q)) {
  if (q_.is_zero()) throw PreconditionError("zero denominator polynomial");
}

Rational RationalSequence::at(std::uint64_t n) const {
  const Rational x(static_cast<unsigned long>(n));
  const Rational den = q_(x);
  if (den.is_zero()) {
    throw PreconditionError("denominator " + q_.str() + " vanishes at n = " +
                            std::to_string(n));
  }
  return p_(x) / den;
}

ExtRational RationalSequence::limit() const {
  if (p_.is_zero() || p_.degree() < q_.degree()) return ExtRational::finite(Rational(0));
  const Rational ratio = p_.leading() / q_.leading();
  if (p_.degree() == q_.degree()) return ExtRational::finite(ratio);
  return ratio.sign() > 0 ? ExtRational::plus_infinity() : ExtRational::minus_infinity();
}

int RationalSequence::approach_side() const {
  const ExtRational l = limit();
  if (!l.is_finite()) throw PreconditionError("approach side of a divergent sequence");
  const Polynomial r = p_ - Polynomial::constant(l.value) * q_;
  return r.eventual_sign() * q_.eventual_sign();
}

std::uint64_t RationalSequence::monotone_from(std::uint64_t start) const {
  const Polynomial d = p_.shifted() * q_ - p_ * q_.shifted();
  const Polynomial q2 = q_ * q_.shifted();
  return std::max({start, d.root_bound(), q2.root_bound(), q_.root_bound()});
}

bool RationalSequence::eventually_in(const Interval& in) const {
  if (in.empty) return false;
  const ExtRational l = limit();
  if (l.infinite > 0) return !in.hi.has_value();
  if (l.infinite < 0) return !in.lo.has_value();
  const int side = approach_side();
  const bool above_lo = !in.lo || l.value > *in.lo || (l.value == *in.lo && side >= 0);
  const bool below_hi = !in.hi || l.value < *in.hi || (l.value == *in.hi && side <= 0);
  return above_lo && below_hi;
}

bool RationalSequence::all_in(const Interval& in, std::uint64_t from) const {
  if (in.empty) return false;
  std::uint64_t n_stable = std::max(from, q_.root_bound());
  if (in.lo) n_stable = std::max(n_stable, (p_ - Polynomial::constant(*in.lo) * q_).root_bound());
  if (in.hi) n_stable = std::max(n_stable, (p_ - Polynomial::constant(*in.hi) * q_).root_bound());
  check_scan(from, n_stable);
  for (std::uint64_t n = from; n <= n_stable; ++n) {
    if (!in.contains(at(n))) return false;
  }
  return eventually_in(in);
}

Interval solve(const std::vector<AffineConstraint>& constraints) {
  Interval out = Interval::all();
  for (const auto& k : constraints) {
    Interval piece;
    if (k.positive_part) {
      // a + c b <= bound
      if (k.b.is_zero()) {
        piece = k.a <= k.bound ? Interval::all() : Interval::none();
      } else if (k.b.sign() > 0) {
        piece.hi = (k.bound - k.a) / k.b;
      } else {
        piece.lo = (k.bound - k.a) / k.b;
      }
    } else {
      if (k.bound.sign() < 0) {
        piece = Interval::none();
      } else if (k.b.is_zero()) {
        piece = abs(k.a) <= k.bound ? Interval::all() : Interval::none();
      } else {
        const Rational e1 = (-k.bound - k.a) / k.b;
        const Rational e2 = (k.bound - k.a) / k.b;
        piece.lo = min(e1, e2);
        piece.hi = max(e1, e2);
      }
    }
    out = out.intersect(piece);
    if (out.empty) return out;
  }
  return out;
}

// --- ConvexProfile ----------------------------------------------------------

Rational ConvexProfile::operator()(const Rational& c) const {
  Rational out;
  for (const auto& t : terms_) {
    const Rational v = t.a + c * t.b;
    out = max(out, t.weight * (t.positive_part ? pos(v) : abs(v)));
  }
  return out;
}

ExtRational ConvexProfile::at_infinity(int direction) const {
  ExtRational out = ExtRational::finite(Rational(0));
  for (const auto& t : terms_) {
    if (t.weight.is_zero()) continue;
    if (t.b.is_zero()) {
      out = max(out, ExtRational::finite(t.weight * (t.positive_part ? pos(t.a) : abs(t.a))));
    } else if (!t.positive_part || direction * t.b.sign() > 0) {
      return ExtRational::plus_infinity();
    }
  }
  return out;
}

ExtRational ConvexProfile::at(const ExtRational& c) const {
  if (!c.is_finite()) return at_infinity(c.infinite);
  return ExtRational::finite((*this)(c.value));
}

namespace {

void require_base(const Element& x) {
  if (!x.base_rooted()) {
    throw PreconditionError("exact sequence decisions need a base-rooted space, got " +
                            x.space().str());
  }
}

std::size_t common_length(std::initializer_list<const Element*> xs) {
  std::size_t n = 0;
  for (const Element* x : xs) n = std::max(n, x->prefix().size());
  return n;
}

// Coordinates 1..L then the tail value.
std::vector<std::pair<Rational, Rational>> paired_coords(const Element& a, const Element& b) {
  require_base(a);
  require_base(b);
  const std::size_t n = common_length({&a, &b});
  std::vector<std::pair<Rational, Rational>> out;
  for (std::size_t j = 1; j <= n; ++j) out.emplace_back(a.coord(j), b.coord(j));
  out.emplace_back(a.tail_value(), b.tail_value());
  return out;
}

}  // namespace

ConvexProfile norm_profile(const Element& a, const Element& b, bool positive_part) {
  const auto coords = paired_coords(a, b);
  const Rational w = a.space().sup_weight();
  std::vector<AffineTerm> terms;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    // The tail coordinate is dominated by |phi|, which carries weight 1.
    const bool tail = i + 1 == coords.size();
    terms.push_back({tail ? Rational(1) : w, coords[i].first, coords[i].second, positive_part});
  }
  return ConvexProfile(std::move(terms));
}

// --- SequenceSpec -----------------------------------------------------------

SequenceSpec::SequenceSpec(Space space, std::vector<Element> explicit_terms, TailRule rule)
    : space_(std::move(space)), explicit_(std::move(explicit_terms)), rule_(std::move(rule)) {
  for (const auto& e : explicit_) {
    if (!(e.space() == space_)) throw SpaceMismatch("explicit term outside " + space_.str());
  }
  if (const auto* c = std::get_if<ConstantTail>(&rule_)) {
    if (!(c->value.space() == space_)) throw SpaceMismatch("constant tail outside " + space_.str());
  } else if (const auto* f = std::get_if<FormulaTail>(&rule_)) {
    if (!(f->base.space() == space_) || !(f->direction.space() == space_)) {
      throw SpaceMismatch("formula tail outside " + space_.str());
    }
    if (f->denominator.is_zero()) throw PreconditionError("zero denominator in formula tail");
    const std::uint64_t first = explicit_.size() + 1;
    const std::uint64_t last = std::max(first, f->denominator.root_bound());
    check_scan(first, last);
    for (std::uint64_t n = first; n <= last; ++n) {
      if (f->denominator(Rational(static_cast<unsigned long>(n))).is_zero()) {
        throw PreconditionError("formula denominator vanishes at n = " + std::to_string(n));
      }
    }
  }
}

SequenceSpec SequenceSpec::canonical_z(const Space& space) {
  return SequenceSpec(space, {}, ZTail{0, Rational(1)});
}

SequenceSpec SequenceSpec::constant(const Element& value) {
  return SequenceSpec(value.space(), {}, ConstantTail{value});
}

SequenceSpec SequenceSpec::scaled(const Element& u, Polynomial p, Polynomial q) {
  return SequenceSpec(u.space(), {},
                      FormulaTail{Element::zero(u.space()), u, std::move(p), std::move(q)});
}

bool SequenceSpec::is_canonical_z() const {
  const auto* z = std::get_if<ZTail>(&rule_);
  return explicit_.empty() && z != nullptr && z->offset == 0 && z->scale == Rational(1);
}

Element SequenceSpec::term(std::uint64_t n) const {
  if (n == 0) throw PreconditionError("sequence index must be >= 1");
  if (n <= explicit_.size()) return explicit_[n - 1];
  if (const auto* c = std::get_if<ConstantTail>(&rule_)) return c->value;
  if (const auto* z = std::get_if<ZTail>(&rule_)) {
    return scale(z->scale, z_seq(space_, n + z->offset));
  }
  const auto& f = std::get<FormulaTail>(rule_);
  const RationalSequence c(f.numerator, f.denominator);
  return add(f.base, scale(c.at(n), f.direction));
}

std::string SequenceSpec::str() const {
  std::ostringstream os;
  os << "seq in " << space_.str() << ": " << explicit_.size() << " explicit, tail ";
  if (const auto* c = std::get_if<ConstantTail>(&rule_)) {
    os << "constant " << c->value.str();
  } else if (const auto* z = std::get_if<ZTail>(&rule_)) {
    os << z->scale << " * z_{n+" << z->offset << "}";
  } else {
    const auto& f = std::get<FormulaTail>(rule_);
    os << f.base.str() << " + (" << f.numerator.str() << ")/(" << f.denominator.str()
       << ") * " << f.direction.str();
  }
  return os.str();
}

// --- decisions --------------------------------------------------------------

std::uint64_t stable_index(const SequenceSpec& seq, const std::vector<Element>& involved) {
  const std::uint64_t first = seq.num_explicit() + 1;
  const auto* z = std::get_if<ZTail>(&seq.rule());
  if (z == nullptr) return first;
  std::uint64_t len = 0;
  for (const auto& e : involved) {
    if (e.base_rooted()) len = std::max<std::uint64_t>(len, e.prefix().size());
  }
  // z_m has its jump at m + 1; once m > len the pattern no longer moves.
  const std::uint64_t need = len + 1 > z->offset ? len + 1 - z->offset : 1;
  return std::max(first, need);
}

bool holds_for_all(const SequenceSpec& seq, const TermPredicate& pred, std::uint64_t from) {
  from = std::max<std::uint64_t>(from, 1);
  const std::uint64_t k = seq.num_explicit();
  for (std::uint64_t n = from; n <= k; ++n) {
    if (!pred.holds(seq.term(n))) return false;
  }
  const std::uint64_t start = std::max(from, k + 1);
  if (const auto* c = std::get_if<ConstantTail>(&seq.rule())) return pred.holds(c->value);
  if (std::holds_alternative<ZTail>(seq.rule())) {
    const std::uint64_t last = std::max(start, stable_index(seq, pred.involved));
    for (std::uint64_t n = start; n <= last; ++n) {
      if (!pred.holds(seq.term(n))) return false;
    }
    return true;
  }
  const auto& f = std::get<FormulaTail>(seq.rule());
  const RationalSequence c(f.numerator, f.denominator);
  return c.all_in(pred.region(f.base, f.direction), start);
}

bool holds_eventually(const SequenceSpec& seq, const TermPredicate& pred) {
  if (const auto* c = std::get_if<ConstantTail>(&seq.rule())) return pred.holds(c->value);
  if (std::holds_alternative<ZTail>(seq.rule())) {
    return pred.holds(seq.term(stable_index(seq, pred.involved)));
  }
  const auto& f = std::get<FormulaTail>(seq.rule());
  const RationalSequence c(f.numerator, f.denominator);
  return c.eventually_in(pred.region(f.base, f.direction));
}

std::optional<std::uint64_t> first_failure(const SequenceSpec& seq, const TermPredicate& pred,
                                           std::uint64_t from, std::uint64_t limit) {
  for (std::uint64_t n = std::max<std::uint64_t>(from, 1); n <= limit; ++n) {
    if (!pred.holds(seq.term(n))) return n;
  }
  return std::nullopt;
}

ExtRational sup_from(const SequenceSpec& seq, const TermFunctional& f, std::uint64_t from) {
  from = std::max<std::uint64_t>(from, 1);
  ExtRational out = ExtRational::minus_infinity();
  auto take = [&out](const Rational& v) { out = max(out, ExtRational::finite(v)); };
  const std::uint64_t k = seq.num_explicit();
  for (std::uint64_t n = from; n <= k; ++n) take(f.value(seq.term(n)));
  const std::uint64_t start = std::max(from, k + 1);
  if (const auto* c = std::get_if<ConstantTail>(&seq.rule())) {
    take(f.value(c->value));
  } else if (std::holds_alternative<ZTail>(seq.rule())) {
    const std::uint64_t last = std::max(start, stable_index(seq, f.involved));
    for (std::uint64_t n = start; n <= last; ++n) take(f.value(seq.term(n)));
  } else {
    const auto& rule = std::get<FormulaTail>(seq.rule());
    const RationalSequence c(rule.numerator, rule.denominator);
    const std::uint64_t mono = c.monotone_from(start);
    check_scan(start, mono);
    for (std::uint64_t n = start; n <= mono; ++n) take(f.value(seq.term(n)));
    // Past `mono` the parameters run monotonically towards the limit, and a
    // convex profile peaks at an end of that range.
    out = max(out, f.profile(rule.base, rule.direction).at(c.limit()));
  }
  return out;
}

ExtRational limit_value(const SequenceSpec& seq, const TermFunctional& f) {
  if (const auto* c = std::get_if<ConstantTail>(&seq.rule())) {
    return ExtRational::finite(f.value(c->value));
  }
  if (std::holds_alternative<ZTail>(seq.rule())) {
    return ExtRational::finite(f.value(seq.term(stable_index(seq, f.involved))));
  }
  const auto& rule = std::get<FormulaTail>(seq.rule());
  const RationalSequence c(rule.numerator, rule.denominator);
  return f.profile(rule.base, rule.direction).at(c.limit());
}

namespace {

// Builds per-coordinate constraints on base + c * dir relative to y.
std::vector<AffineConstraint> coordinatewise(
    const Element& base, const Element& dir, const Element& y,
    const std::function<AffineConstraint(const Rational& b, const Rational& d,
                                         const Rational& y)>& make) {
  require_base(base);
  require_base(dir);
  require_base(y);
  const std::size_t n = common_length({&base, &dir, &y});
  std::vector<AffineConstraint> out;
  for (std::size_t j = 1; j <= n; ++j) out.push_back(make(base.coord(j), dir.coord(j), y.coord(j)));
  out.push_back(make(base.tail_value(), dir.tail_value(), y.tail_value()));
  return out;
}

}  // namespace

TermPredicate pred_geq(const Element& y) {
  TermPredicate p;
  p.holds = [y](const Element& x) { return leq(y, x).is_true(); };
  p.region = [y](const Element& b, const Element& d) {
    return solve(coordinatewise(b, d, y, [](const Rational& bj, const Rational& dj,
                                            const Rational& yj) {
      return AffineConstraint{yj - bj, -dj, Rational(0), true};
    }));
  };
  p.involved = {y};
  return p;
}

TermPredicate pred_leq(const Element& y) {
  TermPredicate p;
  p.holds = [y](const Element& x) { return leq(x, y).is_true(); };
  p.region = [y](const Element& b, const Element& d) {
    return solve(coordinatewise(b, d, y, [](const Rational& bj, const Rational& dj,
                                            const Rational& yj) {
      return AffineConstraint{bj - yj, dj, Rational(0), true};
    }));
  };
  p.involved = {y};
  return p;
}

TermPredicate pred_abs_diff_leq(const Element& x, const Element& v) {
  TermPredicate p;
  p.holds = [x, v](const Element& t) { return leq(abs(sub(t, x)), v).is_true(); };
  p.region = [x, v](const Element& b, const Element& d) {
    const Element shifted = sub(b, x);
    return solve(coordinatewise(shifted, d, v, [](const Rational& bj, const Rational& dj,
                                                  const Rational& vj) {
      return AffineConstraint{bj, dj, vj, false};
    }));
  };
  p.involved = {x, v};
  return p;
}

TermPredicate pred_nonnegative(const Space& space) {
  return pred_geq(Element::zero(space));
}

TermFunctional fn_norm_of_diff(const Element& x) {
  TermFunctional f;
  f.value = [x](const Element& t) { return norm(sub(t, x)); };
  f.profile = [x](const Element& b, const Element& d) {
    return norm_profile(sub(b, x), d, false);
  };
  f.involved = {x};
  return f;
}

TermFunctional fn_pos_excess(const Element& y) {
  TermFunctional f;
  f.value = [y](const Element& t) { return norm(pos_part(sub(y, t))); };
  f.profile = [y](const Element& b, const Element& d) {
    return norm_profile(sub(y, b), scale(Rational(-1), d), true);
  };
  f.involved = {y};
  return f;
}

TermFunctional fn_sup_norm_of_diff(const Element& x) {
  TermFunctional f;
  f.value = [x](const Element& t) { return sup_norm(sub(t, x)); };
  f.profile = [x](const Element& b, const Element& d) {
    std::vector<AffineTerm> terms;
    for (const auto& [a, c] : paired_coords(sub(b, x), d)) {
      terms.push_back({Rational(1), a, c, false});
    }
    return ConvexProfile(std::move(terms));
  };
  f.involved = {x};
  return f;
}

TermFunctional fn_abs_phi_of_diff(const Element& x) {
  TermFunctional f;
  f.value = [x](const Element& t) { return abs(phi(sub(t, x))); };
  f.profile = [x](const Element& b, const Element& d) {
    const Element shifted = sub(b, x);
    return ConvexProfile({{Rational(1), phi(shifted), phi(d), false}});
  };
  f.involved = {x};
  return f;
}

namespace {

// Sign pattern of the direction: +1 if d >= 0, -1 if d <= 0, 0 if d == 0,
// 2 if mixed.
int direction_sign(const Element& d) {
  if (is_zero(d)) return 0;
  const Element z = Element::zero(d.space());
  if (leq(z, d).is_true()) return 1;
  if (leq(d, z).is_true()) return -1;
  return 2;
}

bool tail_monotone(const SequenceSpec& seq, int want) {
  const std::uint64_t first = seq.num_explicit() + 1;
  if (std::holds_alternative<ConstantTail>(seq.rule())) return true;
  if (const auto* z = std::get_if<ZTail>(&seq.rule())) {
    // z_m is decreasing in m.
    return z->scale.is_zero() || (want < 0 ? z->scale.sign() > 0 : z->scale.sign() < 0);
  }
  const auto& f = std::get<FormulaTail>(seq.rule());
  const int ds = direction_sign(f.direction);
  if (ds == 0) return true;
  const Polynomial d = f.numerator.shifted() * f.denominator -
                       f.numerator * f.denominator.shifted();
  const Polynomial q2 = f.denominator * f.denominator.shifted();
  const RationalSequence delta(d, q2);
  Interval allowed;
  if (ds == 2) {
    allowed.lo = Rational(0);
    allowed.hi = Rational(0);
  } else if (ds * want > 0) {
    allowed.lo = Rational(0);
  } else {
    allowed.hi = Rational(0);
  }
  return delta.all_in(allowed, first);
}

bool pairwise_monotone(const SequenceSpec& seq, int want) {
  const std::uint64_t k = seq.num_explicit();
  for (std::uint64_t n = 1; n <= k; ++n) {
    const Element a = seq.term(n);
    const Element b = seq.term(n + 1);
    const bool ok = want < 0 ? leq(b, a).is_true() : leq(a, b).is_true();
    if (!ok) return false;
  }
  return tail_monotone(seq, want);
}

}  // namespace

bool is_decreasing(const SequenceSpec& seq) {
  if (!seq.decidable()) throw PreconditionError("monotonicity needs a base-rooted space");
  return pairwise_monotone(seq, -1);
}

bool is_increasing(const SequenceSpec& seq) {
  if (!seq.decidable()) throw PreconditionError("monotonicity needs a base-rooted space");
  return pairwise_monotone(seq, +1);
}

bool all_strictly_positive(const SequenceSpec& seq) {
  if (!seq.decidable()) throw PreconditionError("positivity needs a base-rooted space");
  if (!holds_for_all(seq, pred_nonnegative(seq.space()))) return false;
  for (const auto& e : seq.explicit_terms()) {
    if (is_zero(e)) return false;
  }
  if (const auto* c = std::get_if<ConstantTail>(&seq.rule())) return !is_zero(c->value);
  if (const auto* z = std::get_if<ZTail>(&seq.rule())) return !z->scale.is_zero();
  const auto& f = std::get<FormulaTail>(seq.rule());
  // Parameters c with base + c * direction == 0.
  const Element zero = Element::zero(seq.space());
  const Interval vanish = solve(coordinatewise(
      f.base, f.direction, zero,
      [](const Rational& b, const Rational& d, const Rational&) {
        return AffineConstraint{b, d, Rational(0), false};
      }));
  if (vanish.empty) return true;
  if (!vanish.lo || !vanish.hi || *vanish.lo != *vanish.hi) return false;
  const Polynomial r = f.numerator - Polynomial::constant(*vanish.lo) * f.denominator;
  if (r.is_zero()) return false;
  const std::uint64_t first = seq.num_explicit() + 1;
  const std::uint64_t last = std::max(first, r.root_bound());
  check_scan(first, last);
  for (std::uint64_t n = first; n <= last; ++n) {
    if (r(Rational(static_cast<unsigned long>(n))).is_zero()) return false;
  }
  return true;
}

// --- JSON -------------------------------------------------------------------

void to_json(nlohmann::json& j, const Polynomial& p) {
  j = nlohmann::json::array();
  for (const auto& c : p.coefficients()) j.push_back(c.str());
}

Polynomial polynomial_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("polynomial must be an array of rationals");
  std::vector<Rational> c;
  for (const auto& t : j) {
    if (!t.is_string()) throw ParseError("polynomial coefficients must be \"p/q\" strings");
    c.push_back(Rational::parse(t.get<std::string>()));
  }
  return Polynomial(std::move(c));
}

void to_json(nlohmann::json& j, const SequenceSpec& s) {
  using nlohmann::json;
  json space;
  to_json(space, s.space());
  json terms = json::array();
  for (const auto& e : s.explicit_terms()) {
    json ej;
    to_json(ej, e);
    terms.push_back(ej);
  }
  json tail;
  if (const auto* c = std::get_if<ConstantTail>(&s.rule())) {
    json v;
    to_json(v, c->value);
    tail = json{{"rule", "constant"}, {"value", v}};
  } else if (const auto* z = std::get_if<ZTail>(&s.rule())) {
    tail = json{{"rule", "z"}, {"offset", z->offset}, {"scale", z->scale.str()}};
  } else {
    const auto& f = std::get<FormulaTail>(s.rule());
    json b, d, p, q;
    to_json(b, f.base);
    to_json(d, f.direction);
    to_json(p, f.numerator);
    to_json(q, f.denominator);
    tail = json{{"rule", "formula"}, {"base", b}, {"direction", d},
                {"numerator", p}, {"denominator", q}};
  }
  j = json{{"schema", "fatou.sequence/1"}, {"space", space}, {"explicit", terms}, {"tail", tail}};
}

SequenceSpec sequence_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw ParseError("sequence must be an object");
    if (j.contains("schema") && j.at("schema") != "fatou.sequence/1") {
      throw ParseError("unsupported sequence schema " + j.at("schema").dump());
    }
    const Space space = space_from_json(j.at("space"));
    std::vector<Element> terms;
    if (j.contains("explicit")) {
      for (const auto& e : j.at("explicit")) terms.push_back(element_from_json(e));
    }
    const auto& t = j.at("tail");
    const std::string rule = t.at("rule").get<std::string>();
    if (rule == "constant") {
      return SequenceSpec(space, std::move(terms), ConstantTail{element_from_json(t.at("value"))});
    }
    if (rule == "z") {
      ZTail z;
      if (t.contains("offset")) z.offset = t.at("offset").get<std::uint64_t>();
      if (t.contains("scale")) z.scale = Rational::parse(t.at("scale").get<std::string>());
      return SequenceSpec(space, std::move(terms), z);
    }
    if (rule == "formula") {
      FormulaTail f{element_from_json(t.at("base")), element_from_json(t.at("direction")),
                    polynomial_from_json(t.at("numerator")),
                    polynomial_from_json(t.at("denominator"))};
      return SequenceSpec(space, std::move(terms), std::move(f));
    }
    throw ParseError("unknown tail rule '" + rule + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("sequence: ") + e.what());
  } catch (const SpaceMismatch& e) {
    throw ParseError(std::string("sequence: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("sequence: ") + e.what());
  }
}

}  // namespace fatou
