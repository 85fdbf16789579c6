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

#ifndef FATOU_PSI_H_
#define FATOU_PSI_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fatou/element.h"
#include "fatou/families.h"
#include "fatou/rational.h"
#include "fatou/sequence.h"
#include "fatou/tree.h"

namespace fatou {

// Membership of a string (y_1, ..., y_k) of positive elements in the tree
// Psi((z_n)):
//   ||(y_i - z_n)^+|| <= ||y_i|| / 3^i      for 1 <= i <= k and all n,
//   ||y_{i+1} - y_i|| <= ||y_i|| / 3^i      for 1 <= i < k.
struct PsiVerdict {
  enum class Outcome { kRefuted, kPassedUpTo, kCertified, kUndetermined };

  Outcome outcome = Outcome::kCertified;
  // Refuted: 1-based position and the index n, or no n for a link.
  std::size_t position = 0;
  std::optional<std::uint64_t> n;
  // Refuted: the violated inequality lhs <= rhs, lhs > rhs. At limit stages
  // lhs is a certified lower bound and rhs a certified upper bound.
  Rational lhs;
  Rational rhs;
  bool exact = true;
  std::uint64_t n_budget = 0;
  std::vector<std::string> trace;

  bool refuted() const { return outcome == Outcome::kRefuted; }
  bool certified() const { return outcome == Outcome::kCertified; }
  // Certified or passed the budget.
  bool accepted() const {
    return outcome == Outcome::kCertified || outcome == Outcome::kPassedUpTo;
  }
  std::string str() const;
};

std::string outcome_name(PsiVerdict::Outcome o);

void to_json(nlohmann::json& j, const PsiVerdict& v);
PsiVerdict psi_verdict_from_json(const nlohmann::json& j);

inline constexpr std::uint64_t kDefaultNBudget = 64;
inline constexpr std::uint64_t kDefaultCertifyComponents = 2;

// Checks the link inequalities and the z-inequalities for n <= n_budget. On
// base-rooted spaces the remaining n are then decided exactly from the tail
// rule, so the verdict is Refuted or Certified. At limit stages norms are
// bounded: a violation is reported only when the bounds prove it, and
// inconclusive bounds give Undetermined.
// Throws PreconditionError for a label that is not strictly positive and
// SpaceMismatch for labels outside the space of z.
PsiVerdict psi_check(const SequenceSpec& z, const std::vector<Element>& string,
                     std::uint64_t n_budget = kDefaultNBudget);

// Certifies canonical witness strings of the constructed trees against the
// canonical z-sequence by replaying the inequality chains; base-rooted
// stages are evaluated exactly and limit stages certify `component_budget`
// components recursively. Any other input is downgraded to psi_check.
PsiVerdict psi_certify(const SequenceSpec& z, const std::vector<Element>& string,
                       std::uint64_t component_budget = kDefaultCertifyComponents);

// The address of a canonical witness string of T_stage, if it is one.
std::optional<std::vector<Ordinal>> recognize_witness_string(
    const Ordinal& stage, const std::vector<Element>& string);

// Certification of the node at `address` of T_stage. Memoized.
PsiVerdict certify_witness_node(const Ordinal& stage, const std::vector<Ordinal>& address,
                                std::uint64_t component_budget = kDefaultCertifyComponents);

// psi_certify when it applies, psi_check otherwise.
PsiVerdict judge(const SequenceSpec& z, const std::vector<Element>& string,
                 std::uint64_t n_budget = kDefaultNBudget);

// Single inequalities, exact on base-rooted spaces.
bool z_inequality_holds(const SequenceSpec& z, const Element& y, std::size_t position);
bool link_holds(const Element& prev, const Element& next, std::size_t position);

struct LowerBoundEstimate {
  Element y;
  // ||y - lim y_i|| <= error.
  Rational error;
  bool exact = false;
  std::vector<std::string> trace;
};

// Cauchy limit of a branch from its k-th term. With a bound M on the norms
// of the later terms the error is M * sum_{i>=k} 3^-i; without one it is
// ||y_k|| * s / (1 - s), s = 3^(1-k) / 2. A branch of identical terms is its
// own limit. Throws PreconditionError if a link inequality fails before k.
LowerBoundEstimate branch_to_lower_bound(const std::vector<Element>& branch, std::size_t k,
                                         std::optional<Rational> tail_norm_bound = {});

// (y_1, ..., y_k) from the dense set with ||y_i - y|| < ||y|| / 7^i.
// Throws BudgetExhausted if the dense set yields nothing within budget.
std::vector<Element> lower_bound_to_branch(const Element& y, const DenseSet& dense,
                                           std::size_t k, std::uint64_t budget = 100000);

// Psi((z_n)) restricted to strings over a finite pool, up to max_depth.
// Labels are "p<index>" with 1-based pool indices.
FiniteTree pool_psi_tree(const SequenceSpec& z, const std::vector<Element>& pool,
                         std::size_t max_depth, std::uint64_t n_budget = kDefaultNBudget);

struct PoolSearchResult {
  // A pool member y > 0 with y <= z_n for every n: the constant string
  // (y, y, ...) is an infinite branch of Psi.
  std::optional<Element> certificate;
  std::size_t deepest = 0;
  std::uint64_t nodes = 0;
  bool reached_max_depth = false;
  bool terminated = true;
};

// Depth-first search of the pool-restricted tree; base-rooted spaces only.
PoolSearchResult pool_psi_search(const SequenceSpec& z, const std::vector<Element>& pool,
                                 std::size_t max_depth, std::uint64_t node_budget = 1000000);

}  // namespace fatou

#endif  // FATOU_PSI_H_
