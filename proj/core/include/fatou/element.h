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

#ifndef FATOU_ELEMENT_H_
#define FATOU_ELEMENT_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fatou/ordinal.h"
#include "fatou/rational.h"
#include "fatou/space.h"

namespace fatou {

class Element;
class TailExpr;
using Tail = std::shared_ptr<const TailExpr>;

// Default number of tail components sampled for lower bounds and for
// deciding order relations at limit stages.
inline constexpr int kDefaultSampleBudget = 8;

enum class TailOp { kZero, kZSeq, kBranch, kScale, kSum, kJoin, kMeet, kPos, kAbs };

// Symbolic description of components m > K of a limit-stage element. The
// generators are z-vectors and tree-node vectors; everything else is built
// with the lattice-linear operations. Immutable and shareable.
class TailExpr {
 public:
  static Tail zero();
  // Component m is z_k of the m-th child stage.
  static Tail zseq(std::uint64_t k);
  // Component m is the label at `address` of the m-th child witness tree,
  // or 0 while the address is not yet valid in that child.
  static Tail branch(std::vector<Ordinal> address);
  static Tail scale(const Rational& c, Tail a);
  static Tail sum(Tail a, Tail b);
  static Tail join(Tail a, Tail b);
  static Tail meet(Tail a, Tail b);
  static Tail pos(Tail a);
  static Tail abs(Tail a);

  TailOp op() const { return op_; }
  std::uint64_t k() const { return k_; }
  const std::vector<Ordinal>& address() const { return address_; }
  const Rational& coefficient() const { return c_; }
  const Tail& lhs() const { return a_; }
  const Tail& rhs() const { return b_; }

  bool equals(const TailExpr& other) const;

  // Component m of this tail inside the limit-rooted space `limit`.
  // Memoized; safe to call concurrently.
  Element materialize(const Space& limit, std::uint64_t m) const;

  // Eventual value of phi along the components.
  Rational phi() const;
  // True if every component is >= 0, by construction.
  bool syntactically_positive() const;
  // Exact sup of component norms when it follows from stored facts.
  std::optional<Rational> exact_sup() const;
  // Certified upper bound on the sup of component norms.
  Rational upper_bound() const;

  std::string str() const;

  TailExpr(TailOp op, std::uint64_t k, std::vector<Ordinal> address,
           Rational c, Tail a, Tail b);
  ~TailExpr();

 private:
  struct Cache;

  TailOp op_;
  std::uint64_t k_ = 0;
  std::vector<Ordinal> address_;
  Rational c_;
  Tail a_;
  Tail b_;
  std::unique_ptr<Cache> cache_;
};

// Certified enclosure of a norm.
struct NormBound {
  Rational lower;
  Rational upper;
  bool exact() const { return lower == upper; }
};

// Three-valued verdict for order comparisons at limit stages.
struct OrderVerdict {
  enum class Kind { kTrue, kFalse, kUnknown };
  Kind kind = Kind::kTrue;
  // For kUnknown: every component up to this index agrees with "true".
  std::uint64_t decided_up_to = 0;

  static OrderVerdict yes() { return {Kind::kTrue, 0}; }
  static OrderVerdict no() { return {Kind::kFalse, 0}; }
  static OrderVerdict unknown_beyond(std::uint64_t m) { return {Kind::kUnknown, m}; }
  bool is_true() const { return kind == Kind::kTrue; }
  bool is_false() const { return kind == Kind::kFalse; }
  bool is_unknown() const { return kind == Kind::kUnknown; }
  std::string str() const;
};

// A vector of some X_alpha. Base-rooted elements are eventually constant
// rational sequences (prefix, tail, tail, ...), stored with trailing prefix
// entries equal to the tail removed. Limit-rooted elements are explicit
// components 1..K followed by a symbolic tail. Successor stages reuse the
// data of their root with a different norm.
class Element {
 public:
  // The zero vector of the base space.
  Element();

  static Element base(const Space& space, std::vector<Rational> prefix,
                      Rational tail);
  static Element limit(const Space& space, std::vector<Element> components,
                       Tail tail);
  static Element zero(const Space& space);
  // Constant sequence (c, c, ...) in a base-rooted space.
  static Element constant(const Space& space, const Rational& c);

  const Space& space() const { return space_; }
  bool base_rooted() const { return space_.base_rooted(); }

  // Base-rooted accessors.
  const std::vector<Rational>& prefix() const;
  const Rational& tail_value() const;
  // Coordinate j >= 1.
  Rational coord(std::uint64_t j) const;

  // Limit-rooted accessors.
  const std::vector<Element>& components() const;
  const Tail& tail() const;
  // Component m >= 1, explicit or materialized.
  Element component(std::uint64_t m) const;

  // The same vector viewed in another stage with the same root.
  Element restaged(const Space& space) const;

  std::string str() const;

  friend bool operator==(const Element& a, const Element& b);

 private:
  struct Data;
  Element(Space space, std::shared_ptr<const Data> data);

  Space space_;
  std::shared_ptr<const Data> data_;
};

// Lattice-linear operations. Operands must live in the same space.
Element add(const Element& x, const Element& y);
Element sub(const Element& x, const Element& y);
Element scale(const Rational& c, const Element& x);
Element join(const Element& x, const Element& y);
Element meet(const Element& x, const Element& y);
Element pos_part(const Element& x);
Element abs(const Element& x);

// The lattice homomorphism phi_alpha: the eventual value of the sequence at
// the base, and the eventual value of the component phis at limits.
Rational phi(const Element& x);

// sup-norm of a base-rooted element.
Rational sup_norm(const Element& x);

// Certified upper bound; exact on base-rooted spaces.
Rational norm_upper(const Element& x);
// Certified lower bound from explicit and sampled components.
Rational norm_lower(const Element& x, int sample_budget = kDefaultSampleBudget);
NormBound norm_bounds(const Element& x, int sample_budget = kDefaultSampleBudget);
// Exact norm. Throws Uncertifiable when a limit-stage tail supremum has no
// exact certificate.
Rational norm(const Element& x);

// x <= y. Exact on base-rooted spaces; three-valued at limit stages.
OrderVerdict leq(const Element& x, const Element& y,
                 int sample_budget = kDefaultSampleBudget);
bool is_zero(const Element& x);
// x >= 0 and x != 0.
OrderVerdict is_strictly_positive(const Element& x,
                                  int sample_budget = kDefaultSampleBudget);

void to_json(nlohmann::json& j, const Element& x);
Element element_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const Tail& t);
Tail tail_from_json(const nlohmann::json& j);

}  // namespace fatou

#endif  // FATOU_ELEMENT_H_
