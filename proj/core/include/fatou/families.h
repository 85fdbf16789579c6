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

#ifndef FATOU_FAMILIES_H_
#define FATOU_FAMILIES_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fatou/element.h"
#include "fatou/ordinal.h"
#include "fatou/rational.h"
#include "fatou/space.h"

namespace fatou {

// Canonical decreasing sequence z_n of a constructed stage: (0 x n, 1, 1, ...)
// at the base, unchanged across successor stages, componentwise at limits.
Element z_seq(const Space& space, std::uint64_t n);

// (1, 1, 1, ...) in a base-rooted space.
Element one(const Space& space);
// (0, ..., 0, t, 0, ...) with t at coordinate j >= 1, base-rooted.
Element spike(const Space& space, std::uint64_t j, const Rational& t);

// Inverse of the Cantor pairing: n -> (a, b) with n = (a+b)(a+b+1)/2 + b.
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t n);
// n-th term (n >= 1) of the Calkin-Wilf enumeration of positive rationals.
Rational calkin_wilf(std::uint64_t n);

// index-th (index >= 1) member of the fixed countable pi-basis: positive
// rational spikes at the base, the inner enumeration at successors, and a
// spike of the child enumeration placed in one component at limits.
Element pi_basis(const Space& space, std::uint64_t index);

// Dominating family {m * one} of a base-rooted space, m >= 1.
Element dominating_element(const Space& space, std::uint64_t m);

// Witness-tree addressing. A node of T_stage is named by a strictly
// decreasing ordinal sequence g_1 > g_2 > ... with g_1 < stage; the node is
// reached by repeatedly moving to a child whose rank is at least g_i.
void validate_address(const Ordinal& stage, const std::vector<Ordinal>& address);
// Canonical representative with the same label string: successor stages do
// not look at their first coordinate.
std::vector<Ordinal> normalize_address(const Ordinal& stage,
                                       const std::vector<Ordinal>& address);
// Last label of the node at `address` in the canonical witness tree T_stage.
// Memoized by normalized address.
Element witness_label(const Ordinal& stage, const std::vector<Ordinal>& address);
// Labels of every prefix of `address`, i.e. the node's full string.
std::vector<Element> witness_string(const Ordinal& stage,
                                    const std::vector<Ordinal>& address);
// A lower bound on the rank of the node at `address` (its last entry, or
// stage itself for the root).
Ordinal address_rank_floor(const Ordinal& stage,
                           const std::vector<Ordinal>& address);

// x >= 0 with phi(x) = 1 and norm 1 (exactly, or with bounds [1, 1]).
bool in_sphere_S(const Element& x, int sample_budget = kDefaultSampleBudget);

// Countable sets of strictly positive elements of a base-rooted space.
class DenseSet {
 public:
  explicit DenseSet(Space space) : space_(std::move(space)) {}
  virtual ~DenseSet() = default;

  virtual std::string name() const = 0;
  // index >= 1.
  virtual Element at(std::uint64_t index) const = 0;
  // Some member at distance < radius from center, scanning indices up to
  // budget unless the set can locate one directly.
  virtual std::optional<Element> find_in_ball(const Element& center,
                                              const Rational& radius,
                                              std::uint64_t budget) const;

  const Space& space() const { return space_; }

 private:
  Space space_;
};

// All eventually constant sequences with non-negative rational entries,
// enumerated by iterated Cantor unpairing; the zero sequence maps to one.
class DiagonalRationalSet : public DenseSet {
 public:
  using DenseSet::DenseSet;
  std::string name() const override { return "diagonal-rational"; }
  Element at(std::uint64_t index) const override;
};

// spike + c * one for rational spikes and constants.
class SpikesPlusConstantsSet : public DenseSet {
 public:
  using DenseSet::DenseSet;
  std::string name() const override { return "spikes-plus-constants"; }
  Element at(std::uint64_t index) const override;
};

// Eventually constant sequences with dyadic entries. Balls are searched by
// rounding the center down to a fine enough grid.
class DyadicGridSet : public DenseSet {
 public:
  using DenseSet::DenseSet;
  std::string name() const override { return "dyadic-grid"; }
  Element at(std::uint64_t index) const override;
  std::optional<Element> find_in_ball(const Element& center,
                                      const Rational& radius,
                                      std::uint64_t budget) const override;
};

// A finite list, cycled.
class ListDenseSet : public DenseSet {
 public:
  ListDenseSet(Space space, std::vector<Element> items);
  std::string name() const override { return "list"; }
  Element at(std::uint64_t index) const override;
  std::size_t size() const { return items_.size(); }

 private:
  std::vector<Element> items_;
};

}  // namespace fatou

#endif  // FATOU_FAMILIES_H_
