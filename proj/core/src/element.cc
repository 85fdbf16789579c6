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

#include "fatou/element.h"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "fatou/errors.h"
#include "fatou/families.h"

namespace fatou {

// --- TailExpr ---------------------------------------------------------------

struct TailExpr::Cache {
  std::mutex mu;
  std::map<std::pair<std::string, std::uint64_t>, Element> components;
};

TailExpr::TailExpr(TailOp op, std::uint64_t k, std::vector<Ordinal> address,
                   Rational c, Tail a, Tail b)
    : op_(op),
      k_(k),
      address_(std::move(address)),
      c_(std::move(c)),
      a_(std::move(a)),
      b_(std::move(b)),
      cache_(std::make_unique<Cache>()) {}

TailExpr::~TailExpr() = default;

namespace {

Tail make(TailOp op, std::uint64_t k = 0, std::vector<Ordinal> address = {},
          Rational c = Rational(), Tail a = nullptr, Tail b = nullptr) {
  return std::make_shared<const TailExpr>(op, k, std::move(address),
                                          std::move(c), std::move(a),
                                          std::move(b));
}

bool is_zero_tail(const Tail& t) { return t->op() == TailOp::kZero; }

// Matches Scale(-1, inner) and returns inner.
const TailExpr* negated(const Tail& t) {
  if (t->op() == TailOp::kScale && t->coefficient() == Rational(-1)) {
    return t->lhs().get();
  }
  return nullptr;
}

bool extends_by_one(const std::vector<Ordinal>& longer,
                    const std::vector<Ordinal>& shorter) {
  return longer.size() == shorter.size() + 1 &&
         std::equal(shorter.begin(), shorter.end(), longer.begin());
}

Rational third_power(std::size_t i) {
  return Rational(1) / power(Rational(3), static_cast<unsigned>(i));
}

}  // namespace

Tail TailExpr::zero() {
  static const Tail kZero = make(TailOp::kZero);
  return kZero;
}

Tail TailExpr::zseq(std::uint64_t k) {
  if (k == 0) throw PreconditionError("z-sequence index must be >= 1");
  return make(TailOp::kZSeq, k);
}

Tail TailExpr::branch(std::vector<Ordinal> address) {
  if (address.empty()) throw PreconditionError("branch address must be nonempty");
  for (std::size_t i = 1; i < address.size(); ++i) {
    if (!(address[i] < address[i - 1])) {
      throw PreconditionError("branch address must strictly decrease");
    }
  }
  return make(TailOp::kBranch, 0, std::move(address));
}

Tail TailExpr::scale(const Rational& c, Tail a) {
  if (c.is_zero() || is_zero_tail(a)) return zero();
  if (c == Rational(1)) return a;
  if (a->op() == TailOp::kScale) return scale(c * a->coefficient(), a->lhs());
  return make(TailOp::kScale, 0, {}, c, std::move(a));
}

Tail TailExpr::sum(Tail a, Tail b) {
  if (is_zero_tail(a)) return b;
  if (is_zero_tail(b)) return a;
  if (const TailExpr* nb = negated(b); nb != nullptr && nb->equals(*a)) {
    return zero();
  }
  if (const TailExpr* na = negated(a); na != nullptr && na->equals(*b)) {
    return zero();
  }
  return make(TailOp::kSum, 0, {}, Rational(), std::move(a), std::move(b));
}

Tail TailExpr::join(Tail a, Tail b) {
  if (a->equals(*b)) return a;
  if (is_zero_tail(a) && b->syntactically_positive()) return b;
  if (is_zero_tail(b) && a->syntactically_positive()) return a;
  return make(TailOp::kJoin, 0, {}, Rational(), std::move(a), std::move(b));
}

Tail TailExpr::meet(Tail a, Tail b) {
  if (a->equals(*b)) return a;
  if (is_zero_tail(a) && b->syntactically_positive()) return a;
  if (is_zero_tail(b) && a->syntactically_positive()) return b;
  return make(TailOp::kMeet, 0, {}, Rational(), std::move(a), std::move(b));
}

Tail TailExpr::pos(Tail a) {
  if (a->syntactically_positive()) return a;
  return make(TailOp::kPos, 0, {}, Rational(), std::move(a));
}

Tail TailExpr::abs(Tail a) {
  if (a->syntactically_positive()) return a;
  if (a->op() == TailOp::kAbs) return a;
  return make(TailOp::kAbs, 0, {}, Rational(), std::move(a));
}

bool TailExpr::equals(const TailExpr& o) const {
  if (this == &o) return true;
  if (op_ != o.op_) return false;
  switch (op_) {
    case TailOp::kZero:
      return true;
    case TailOp::kZSeq:
      return k_ == o.k_;
    case TailOp::kBranch:
      return address_ == o.address_;
    case TailOp::kScale:
      return c_ == o.c_ && a_->equals(*o.a_);
    case TailOp::kPos:
    case TailOp::kAbs:
      return a_->equals(*o.a_);
    default:
      return a_->equals(*o.a_) && b_->equals(*o.b_);
  }
}

Element TailExpr::materialize(const Space& limit, std::uint64_t m) const {
  if (m == 0) throw PreconditionError("component index must be >= 1");
  const Space root(limit.root());
  const auto key = std::make_pair(root.stage().str(), m);
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (auto it = cache_->components.find(key); it != cache_->components.end()) {
      return it->second;
    }
  }
  const Space child = root.child(m);
  Element out;
  switch (op_) {
    case TailOp::kZero:
      out = Element::zero(child);
      break;
    case TailOp::kZSeq:
      out = z_seq(child, k_);
      break;
    case TailOp::kBranch:
      out = m >= start_index(root.stage(), address_.front())
                ? witness_label(child.stage(), address_)
                : Element::zero(child);
      break;
    case TailOp::kScale:
      out = fatou::scale(c_, a_->materialize(root, m));
      break;
    case TailOp::kSum:
      out = add(a_->materialize(root, m), b_->materialize(root, m));
      break;
    case TailOp::kJoin:
      out = fatou::join(a_->materialize(root, m), b_->materialize(root, m));
      break;
    case TailOp::kMeet:
      out = fatou::meet(a_->materialize(root, m), b_->materialize(root, m));
      break;
    case TailOp::kPos:
      out = pos_part(a_->materialize(root, m));
      break;
    case TailOp::kAbs:
      out = fatou::abs(a_->materialize(root, m));
      break;
  }
  std::lock_guard<std::mutex> lock(cache_->mu);
  // Racing writers computed the same value; keep the first.
  return cache_->components.emplace(key, out).first->second;
}

Rational TailExpr::phi() const {
  switch (op_) {
    case TailOp::kZero:
      return Rational(0);
    case TailOp::kZSeq:
    case TailOp::kBranch:
      return Rational(1);
    case TailOp::kScale:
      return c_ * a_->phi();
    case TailOp::kSum:
      return a_->phi() + b_->phi();
    case TailOp::kJoin:
      return max(a_->phi(), b_->phi());
    case TailOp::kMeet:
      return min(a_->phi(), b_->phi());
    case TailOp::kPos:
      return fatou::pos(a_->phi());
    case TailOp::kAbs:
      return fatou::abs(a_->phi());
  }
  return Rational(0);
}

bool TailExpr::syntactically_positive() const {
  switch (op_) {
    case TailOp::kZero:
    case TailOp::kZSeq:
    case TailOp::kBranch:
    case TailOp::kPos:
    case TailOp::kAbs:
      return true;
    case TailOp::kScale:
      return c_.sign() >= 0 && a_->syntactically_positive();
    case TailOp::kSum: {
      if (a_->syntactically_positive() && b_->syntactically_positive()) return true;
      // z_k - z_k' >= 0 for k <= k'.
      const TailExpr* nb = negated(b_);
      return a_->op() == TailOp::kZSeq && nb != nullptr &&
             nb->op() == TailOp::kZSeq && a_->k() <= nb->k();
    }
    case TailOp::kJoin:
      return a_->syntactically_positive() || b_->syntactically_positive();
    case TailOp::kMeet:
      return a_->syntactically_positive() && b_->syntactically_positive();
  }
  return false;
}

std::optional<Rational> TailExpr::exact_sup() const {
  switch (op_) {
    case TailOp::kZero:
      return Rational(0);
    case TailOp::kZSeq:
    case TailOp::kBranch:
      return Rational(1);
    case TailOp::kScale: {
      auto inner = a_->exact_sup();
      if (!inner) return std::nullopt;
      return fatou::abs(c_) * *inner;
    }
    default:
      return std::nullopt;
  }
}

Rational TailExpr::upper_bound() const {
  switch (op_) {
    case TailOp::kZero:
      return Rational(0);
    case TailOp::kZSeq:
    case TailOp::kBranch:
      return Rational(1);
    case TailOp::kScale:
      return fatou::abs(c_) * a_->upper_bound();
    case TailOp::kSum: {
      // Consecutive tree nodes: ||y_{i+1} - y_i|| <= 3^-i componentwise.
      const TailExpr* nb = negated(b_);
      if (nb != nullptr && a_->op() == TailOp::kBranch &&
          nb->op() == TailOp::kBranch) {
        if (extends_by_one(a_->address(), nb->address())) {
          return third_power(nb->address().size());
        }
        if (extends_by_one(nb->address(), a_->address())) {
          return third_power(a_->address().size());
        }
      }
      // 0 <= A - B <= A when B >= 0.
      if (nb != nullptr && nb->syntactically_positive() && syntactically_positive()) {
        return a_->upper_bound();
      }
      return a_->upper_bound() + b_->upper_bound();
    }
    case TailOp::kJoin:
      return a_->upper_bound() + b_->upper_bound();
    case TailOp::kMeet:
      if (a_->syntactically_positive() && b_->syntactically_positive()) {
        return min(a_->upper_bound(), b_->upper_bound());
      }
      return a_->upper_bound() + b_->upper_bound();
    case TailOp::kPos: {
      Rational best = a_->upper_bound();
      if (a_->op() == TailOp::kSum) {
        const TailExpr* nb = negated(a_->rhs());
        if (nb != nullptr && nb->syntactically_positive()) {
          // (A - B)^+ <= A^+ when B >= 0.
          best = min(best, a_->lhs()->upper_bound());
          // Tree nodes sit almost below every z_n: ||(y_i - z_n)^+|| <= 3^-i.
          if (a_->lhs()->op() == TailOp::kBranch && nb->op() == TailOp::kZSeq) {
            best = min(best, third_power(a_->lhs()->address().size()));
          }
        }
      }
      return best;
    }
    case TailOp::kAbs:
      return a_->upper_bound();
  }
  return Rational(0);
}

std::string TailExpr::str() const {
  switch (op_) {
    case TailOp::kZero:
      return "0";
    case TailOp::kZSeq:
      return "z" + std::to_string(k_);
    case TailOp::kBranch: {
      std::string out = "y[";
      for (std::size_t i = 0; i < address_.size(); ++i) {
        if (i > 0) out += ",";
        out += address_[i].str();
      }
      return out + "]";
    }
    case TailOp::kScale:
      return c_.str() + "*" + a_->str();
    case TailOp::kSum:
      return "(" + a_->str() + " + " + b_->str() + ")";
    case TailOp::kJoin:
      return "(" + a_->str() + " v " + b_->str() + ")";
    case TailOp::kMeet:
      return "(" + a_->str() + " ^ " + b_->str() + ")";
    case TailOp::kPos:
      return "pos(" + a_->str() + ")";
    case TailOp::kAbs:
      return "|" + a_->str() + "|";
  }
  return "?";
}

std::string OrderVerdict::str() const {
  switch (kind) {
    case Kind::kTrue:
      return "true";
    case Kind::kFalse:
      return "false";
    case Kind::kUnknown:
      return "unknown beyond component " + std::to_string(decided_up_to);
  }
  return "?";
}

// --- Element ----------------------------------------------------------------

struct Element::Data {
  bool base = true;
  std::vector<Rational> prefix;
  Rational tail;
  std::vector<Element> components;
  Tail tail_expr;
};

namespace {

void require_same_space(const Element& x, const Element& y) {
  if (!(x.space() == y.space())) {
    throw SpaceMismatch("operands live in " + x.space().str() + " and " +
                        y.space().str());
  }
}

}  // namespace

Element::Element() : space_(Space::base()) {
  static const auto kData = std::make_shared<const Data>();
  data_ = kData;
}

Element::Element(Space space, std::shared_ptr<const Data> data)
    : space_(std::move(space)), data_(std::move(data)) {}

Element Element::base(const Space& space, std::vector<Rational> prefix,
                      Rational tail) {
  if (!space.base_rooted()) {
    throw SpaceMismatch(space.str() + " is not a sequence-space stage");
  }
  while (!prefix.empty() && prefix.back() == tail) prefix.pop_back();
  auto data = std::make_shared<Data>();
  data->base = true;
  data->prefix = std::move(prefix);
  data->tail = std::move(tail);
  return Element(space, std::move(data));
}

Element Element::limit(const Space& space, std::vector<Element> components,
                       Tail tail) {
  if (space.base_rooted()) {
    throw SpaceMismatch(space.str() + " is not a limit-rooted stage");
  }
  const Space root(space.root());
  for (std::size_t i = 0; i < components.size(); ++i) {
    const Space expected = root.child(i + 1);
    if (!(components[i].space() == expected)) {
      throw SpaceMismatch("component " + std::to_string(i + 1) + " lives in " +
                          components[i].space().str() + ", expected " +
                          expected.str());
    }
  }
  auto data = std::make_shared<Data>();
  data->base = false;
  data->components = std::move(components);
  data->tail_expr = tail ? std::move(tail) : TailExpr::zero();
  return Element(space, std::move(data));
}

Element Element::zero(const Space& space) {
  if (space.base_rooted()) return base(space, {}, Rational(0));
  return limit(space, {}, TailExpr::zero());
}

Element Element::constant(const Space& space, const Rational& c) {
  return base(space, {}, c);
}

const std::vector<Rational>& Element::prefix() const {
  if (!data_->base) throw PreconditionError("prefix() on a limit-stage element");
  return data_->prefix;
}

const Rational& Element::tail_value() const {
  if (!data_->base) throw PreconditionError("tail_value() on a limit-stage element");
  return data_->tail;
}

Rational Element::coord(std::uint64_t j) const {
  if (j == 0) throw PreconditionError("coordinates are 1-based");
  const auto& p = prefix();
  return j <= p.size() ? p[j - 1] : data_->tail;
}

const std::vector<Element>& Element::components() const {
  if (data_->base) throw PreconditionError("components() on a base-stage element");
  return data_->components;
}

const Tail& Element::tail() const {
  if (data_->base) throw PreconditionError("tail() on a base-stage element");
  return data_->tail_expr;
}

Element Element::component(std::uint64_t m) const {
  if (m == 0) throw PreconditionError("component index must be >= 1");
  const auto& comps = components();
  if (m <= comps.size()) return comps[m - 1];
  return data_->tail_expr->materialize(Space(space_.root()), m);
}

Element Element::restaged(const Space& space) const {
  if (!(space.root() == space_.root())) {
    throw SpaceMismatch("cannot view an element of " + space_.str() + " in " +
                        space.str());
  }
  return Element(space, data_);
}

std::string Element::str() const {
  std::ostringstream os;
  if (data_->base) {
    os << "(";
    for (const auto& t : data_->prefix) os << t << ", ";
    os << data_->tail << ", ...)";
  } else {
    os << "<";
    for (const auto& c : data_->components) os << c.str() << "; ";
    os << "tail " << data_->tail_expr->str() << ">";
  }
  return os.str();
}

bool operator==(const Element& a, const Element& b) {
  if (!(a.space_ == b.space_)) return false;
  if (a.data_ == b.data_) return true;
  if (a.data_->base != b.data_->base) return false;
  if (a.data_->base) {
    return a.data_->prefix == b.data_->prefix && a.data_->tail == b.data_->tail;
  }
  return a.data_->components == b.data_->components &&
         a.data_->tail_expr->equals(*b.data_->tail_expr);
}

// --- lattice-linear operations ---------------------------------------------

namespace {

template <typename F>
Element base_binary(const Element& x, const Element& y, F f) {
  const std::size_t n = std::max(x.prefix().size(), y.prefix().size());
  std::vector<Rational> out;
  out.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) out.push_back(f(x.coord(j), y.coord(j)));
  return Element::base(x.space(), std::move(out),
                       f(x.tail_value(), y.tail_value()));
}

template <typename F>
Element base_unary(const Element& x, F f) {
  std::vector<Rational> out;
  out.reserve(x.prefix().size());
  for (const auto& t : x.prefix()) out.push_back(f(t));
  return Element::base(x.space(), std::move(out), f(x.tail_value()));
}

template <typename F, typename G>
Element limit_binary(const Element& x, const Element& y, F component_op,
                     G tail_op) {
  const std::size_t n =
      std::max(x.components().size(), y.components().size());
  std::vector<Element> out;
  out.reserve(n);
  for (std::size_t m = 1; m <= n; ++m) {
    out.push_back(component_op(x.component(m), y.component(m)));
  }
  return Element::limit(x.space(), std::move(out), tail_op(x.tail(), y.tail()));
}

template <typename F, typename G>
Element limit_unary(const Element& x, F component_op, G tail_op) {
  std::vector<Element> out;
  out.reserve(x.components().size());
  for (const auto& c : x.components()) out.push_back(component_op(c));
  return Element::limit(x.space(), std::move(out), tail_op(x.tail()));
}

}  // namespace

Element add(const Element& x, const Element& y) {
  require_same_space(x, y);
  if (x.base_rooted()) {
    return base_binary(x, y, [](const Rational& a, const Rational& b) { return a + b; });
  }
  return limit_binary(x, y, [](const Element& a, const Element& b) { return add(a, b); },
                      [](const Tail& a, const Tail& b) { return TailExpr::sum(a, b); });
}

Element scale(const Rational& c, const Element& x) {
  if (x.base_rooted()) {
    return base_unary(x, [&c](const Rational& a) { return c * a; });
  }
  return limit_unary(x, [&c](const Element& a) { return scale(c, a); },
                     [&c](const Tail& a) { return TailExpr::scale(c, a); });
}

Element sub(const Element& x, const Element& y) {
  require_same_space(x, y);
  return add(x, scale(Rational(-1), y));
}

Element join(const Element& x, const Element& y) {
  require_same_space(x, y);
  if (x.base_rooted()) {
    return base_binary(x, y, [](const Rational& a, const Rational& b) { return max(a, b); });
  }
  return limit_binary(x, y, [](const Element& a, const Element& b) { return join(a, b); },
                      [](const Tail& a, const Tail& b) { return TailExpr::join(a, b); });
}

Element meet(const Element& x, const Element& y) {
  require_same_space(x, y);
  if (x.base_rooted()) {
    return base_binary(x, y, [](const Rational& a, const Rational& b) { return min(a, b); });
  }
  return limit_binary(x, y, [](const Element& a, const Element& b) { return meet(a, b); },
                      [](const Tail& a, const Tail& b) { return TailExpr::meet(a, b); });
}

Element pos_part(const Element& x) {
  if (x.base_rooted()) return base_unary(x, [](const Rational& a) { return pos(a); });
  return limit_unary(x, [](const Element& a) { return pos_part(a); },
                     [](const Tail& a) { return TailExpr::pos(a); });
}

Element abs(const Element& x) {
  if (x.base_rooted()) {
    return base_unary(x, [](const Rational& a) { return fatou::abs(a); });
  }
  return limit_unary(x, [](const Element& a) { return abs(a); },
                     [](const Tail& a) { return TailExpr::abs(a); });
}

// --- phi and norms ----------------------------------------------------------

Rational phi(const Element& x) {
  if (x.base_rooted()) return x.tail_value();
  return x.tail()->phi();
}

Rational sup_norm(const Element& x) {
  Rational out = fatou::abs(x.tail_value());
  for (const auto& t : x.prefix()) out = max(out, fatou::abs(t));
  return out;
}

namespace {

// Applies the successor renormings above the root: max(v / 7^h, |phi|).
Rational lift(const Element& x, const Rational& root_norm) {
  const auto h = x.space().height();
  if (h == 0) return root_norm;
  return max(root_norm / power(Rational(7), static_cast<unsigned>(h)),
             fatou::abs(phi(x)));
}

Rational base_norm(const Element& x) {
  return max(x.space().sup_weight() * sup_norm(x), fatou::abs(phi(x)));
}

}  // namespace

Rational norm_upper(const Element& x) {
  if (x.base_rooted()) return base_norm(x);
  Rational v = x.tail()->upper_bound();
  for (const auto& c : x.components()) v = max(v, norm_upper(c));
  return lift(x, v);
}

Rational norm_lower(const Element& x, int sample_budget) {
  if (x.base_rooted()) return base_norm(x);
  Rational v;
  for (const auto& c : x.components()) v = max(v, norm_lower(c, sample_budget));
  if (auto exact = x.tail()->exact_sup()) {
    v = max(v, *exact);
  } else {
    const std::uint64_t k = x.components().size();
    for (int s = 1; s <= sample_budget; ++s) {
      v = max(v, norm_lower(x.component(k + s), sample_budget / 2));
    }
  }
  return lift(x, v);
}

NormBound norm_bounds(const Element& x, int sample_budget) {
  NormBound b{norm_lower(x, sample_budget), norm_upper(x)};
  if (b.upper < b.lower) {
    throw CertificateError("norm bounds crossed for " + x.str());
  }
  return b;
}

Rational norm(const Element& x) {
  if (x.base_rooted()) return base_norm(x);
  auto tail = x.tail()->exact_sup();
  if (!tail) {
    throw Uncertifiable("no exact tail supremum for " + x.tail()->str() +
                        "; use norm_bounds");
  }
  Rational v = *tail;
  for (const auto& c : x.components()) v = max(v, norm(c));
  return lift(x, v);
}

// --- order ------------------------------------------------------------------

namespace {

OrderVerdict tail_leq(const Tail& a, const Tail& b, const Space& root,
                      std::uint64_t first, int sample_budget) {
  if (a->equals(*b)) return OrderVerdict::yes();
  if (TailExpr::sum(b, TailExpr::scale(Rational(-1), a))->syntactically_positive()) {
    return OrderVerdict::yes();
  }
  std::uint64_t last = first;
  for (int s = 0; s < sample_budget; ++s) {
    const std::uint64_t m = first + s;
    // Nested limit stages would otherwise cost sample_budget^depth.
    const auto v = leq(a->materialize(root, m), b->materialize(root, m),
                       sample_budget / 2);
    if (v.is_false()) return OrderVerdict::no();
    last = m;
  }
  return OrderVerdict::unknown_beyond(last);
}

}  // namespace

OrderVerdict leq(const Element& x, const Element& y, int sample_budget) {
  require_same_space(x, y);
  if (x.base_rooted()) {
    const std::size_t n = std::max(x.prefix().size(), y.prefix().size());
    for (std::size_t j = 1; j <= n; ++j) {
      if (x.coord(j) > y.coord(j)) return OrderVerdict::no();
    }
    return x.tail_value() <= y.tail_value() ? OrderVerdict::yes()
                                            : OrderVerdict::no();
  }
  const std::size_t n = std::max(x.components().size(), y.components().size());
  bool unknown = false;
  std::uint64_t reach = 0;
  for (std::size_t m = 1; m <= n; ++m) {
    const auto v = leq(x.component(m), y.component(m), sample_budget);
    if (v.is_false()) return OrderVerdict::no();
    if (v.is_unknown()) unknown = true;
  }
  const auto t = tail_leq(x.tail(), y.tail(), Space(x.space().root()), n + 1,
                          sample_budget);
  if (t.is_false()) return t;
  if (t.is_unknown()) {
    unknown = true;
    reach = t.decided_up_to;
  }
  if (unknown) return OrderVerdict::unknown_beyond(reach == 0 ? n : reach);
  return OrderVerdict::yes();
}

bool is_zero(const Element& x) {
  if (x.base_rooted()) return x.prefix().empty() && x.tail_value().is_zero();
  return norm_upper(x).is_zero();
}

OrderVerdict is_strictly_positive(const Element& x, int sample_budget) {
  const auto v = leq(Element::zero(x.space()), x, sample_budget);
  if (!v.is_true()) return v;
  if (norm_lower(x, sample_budget).sign() > 0) return OrderVerdict::yes();
  if (norm_upper(x).is_zero()) return OrderVerdict::no();
  return OrderVerdict::unknown_beyond(x.base_rooted() ? 0 : x.components().size());
}

// --- JSON -------------------------------------------------------------------

void to_json(nlohmann::json& j, const Tail& t) {
  using nlohmann::json;
  switch (t->op()) {
    case TailOp::kZero:
      j = json{{"op", "zero"}};
      return;
    case TailOp::kZSeq:
      j = json{{"op", "zseq"}, {"k", t->k()}};
      return;
    case TailOp::kBranch: {
      json addr = json::array();
      for (const auto& g : t->address()) {
        json o;
        to_json(o, g);
        addr.push_back(o);
      }
      j = json{{"op", "branch"}, {"address", addr}};
      return;
    }
    case TailOp::kScale: {
      json a;
      to_json(a, t->lhs());
      j = json{{"op", "scale"}, {"c", t->coefficient().str()}, {"arg", a}};
      return;
    }
    case TailOp::kPos:
    case TailOp::kAbs: {
      json a;
      to_json(a, t->lhs());
      j = json{{"op", t->op() == TailOp::kPos ? "pos" : "abs"}, {"arg", a}};
      return;
    }
    default: {
      json a, b;
      to_json(a, t->lhs());
      to_json(b, t->rhs());
      const char* name = t->op() == TailOp::kSum    ? "sum"
                         : t->op() == TailOp::kJoin ? "join"
                                                    : "meet";
      j = json{{"op", name}, {"args", json::array({a, b})}};
      return;
    }
  }
}

Tail tail_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("op") || !j.at("op").is_string()) {
    throw ParseError("tail expression must be an object with 'op'");
  }
  const std::string op = j.at("op").get<std::string>();
  auto args = [&j]() {
    if (!j.contains("args") || !j.at("args").is_array() || j.at("args").size() != 2) {
      throw ParseError("tail expression needs two 'args'");
    }
    return std::make_pair(tail_from_json(j.at("args")[0]),
                          tail_from_json(j.at("args")[1]));
  };
  auto arg = [&j]() {
    if (!j.contains("arg")) throw ParseError("tail expression needs 'arg'");
    return tail_from_json(j.at("arg"));
  };
  try {
    if (op == "zero") return TailExpr::zero();
    if (op == "zseq") return TailExpr::zseq(j.at("k").get<std::uint64_t>());
    if (op == "branch") {
      std::vector<Ordinal> addr;
      for (const auto& g : j.at("address")) {
        Ordinal o;
        from_json(g, o);
        addr.push_back(o);
      }
      return TailExpr::branch(std::move(addr));
    }
    if (op == "scale") {
      return TailExpr::scale(Rational::parse(j.at("c").get<std::string>()), arg());
    }
    if (op == "pos") return TailExpr::pos(arg());
    if (op == "abs") return TailExpr::abs(arg());
    if (op == "sum" || op == "join" || op == "meet") {
      auto [a, b] = args();
      if (op == "sum") return TailExpr::sum(a, b);
      if (op == "join") return TailExpr::join(a, b);
      return TailExpr::meet(a, b);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("tail expression: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("tail expression: ") + e.what());
  }
  throw ParseError("unknown tail op '" + op + "'");
}

void to_json(nlohmann::json& j, const Element& x) {
  using nlohmann::json;
  json space;
  to_json(space, x.space());
  json payload;
  if (x.base_rooted()) {
    json prefix = json::array();
    for (const auto& t : x.prefix()) prefix.push_back(t.str());
    payload = json{{"base", json{{"prefix", prefix}, {"tail", x.tail_value().str()}}}};
  } else {
    json comps = json::array();
    for (const auto& c : x.components()) {
      json cj;
      to_json(cj, c);
      comps.push_back(cj);
    }
    json tail;
    to_json(tail, x.tail());
    payload = json{{"limit", json{{"components", comps}, {"tail", tail}}}};
  }
  j = json{{"space", space}, {"payload", payload}};
}

Element element_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("space") || !j.contains("payload")) {
    throw ParseError("element must be an object with 'space' and 'payload'");
  }
  const Space space = space_from_json(j.at("space"));
  const auto& payload = j.at("payload");
  try {
    if (space.base_rooted()) {
      if (!payload.contains("base")) {
        throw ParseError("element of " + space.str() + " needs a 'base' payload");
      }
      const auto& b = payload.at("base");
      std::vector<Rational> prefix;
      for (const auto& t : b.at("prefix")) {
        prefix.push_back(Rational::parse(t.get<std::string>()));
      }
      return Element::base(space, std::move(prefix),
                           Rational::parse(b.at("tail").get<std::string>()));
    }
    if (!payload.contains("limit")) {
      throw ParseError("element of " + space.str() + " needs a 'limit' payload");
    }
    const auto& l = payload.at("limit");
    std::vector<Element> comps;
    for (const auto& c : l.at("components")) comps.push_back(element_from_json(c));
    return Element::limit(space, std::move(comps), tail_from_json(l.at("tail")));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("element payload: ") + e.what());
  } catch (const SpaceMismatch& e) {
    throw ParseError(std::string("element payload: ") + e.what());
  }
}

}  // namespace fatou
