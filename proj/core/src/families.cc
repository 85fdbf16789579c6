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

#include "fatou/families.h"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "fatou/errors.h"

namespace fatou {

Element z_seq(const Space& space, std::uint64_t n) {
  if (n == 0) throw PreconditionError("z_n needs n >= 1");
  if (space.base_rooted()) {
    return Element::base(space, std::vector<Rational>(n, Rational(0)), Rational(1));
  }
  return Element::limit(space, {}, TailExpr::zseq(n));
}

Element one(const Space& space) { return Element::constant(space, Rational(1)); }

Element spike(const Space& space, std::uint64_t j, const Rational& t) {
  if (j == 0) throw PreconditionError("coordinates are 1-based");
  std::vector<Rational> prefix(j, Rational(0));
  prefix[j - 1] = t;
  return Element::base(space, std::move(prefix), Rational(0));
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t n) {
  auto w = static_cast<std::uint64_t>(
      (std::sqrt(8.0L * static_cast<long double>(n) + 1.0L) - 1.0L) / 2.0L);
  // Repair floating point drift.
  while (w * (w + 1) / 2 > n) --w;
  while ((w + 1) * (w + 2) / 2 <= n) ++w;
  const std::uint64_t b = n - w * (w + 1) / 2;
  return {w - b, b};
}

Rational calkin_wilf(std::uint64_t n) {
  if (n == 0) throw PreconditionError("Calkin-Wilf index must be >= 1");
  int top = 63;
  while (((n >> top) & 1ULL) == 0) --top;
  mpz_class a = 1, b = 1;
  for (int bit = top - 1; bit >= 0; --bit) {
    if ((n >> bit) & 1ULL) {
      a = a + b;
    } else {
      b = a + b;
    }
  }
  return Rational(mpq_class(a, b));
}

Element pi_basis(const Space& space, std::uint64_t index) {
  if (index == 0) throw PreconditionError("pi-basis index must be >= 1");
  const auto [a, b] = cantor_unpair(index - 1);
  if (space.base_rooted()) return spike(space, a + 1, calkin_wilf(b + 1));
  const Space root(space.root());
  const std::uint64_t n = a + 1;
  std::vector<Element> comps;
  comps.reserve(n);
  for (std::uint64_t m = 1; m < n; ++m) comps.push_back(Element::zero(root.child(m)));
  comps.push_back(pi_basis(root.child(n), b + 1));
  return Element::limit(root, std::move(comps), TailExpr::zero()).restaged(space);
}

Element dominating_element(const Space& space, std::uint64_t m) {
  if (m == 0) throw PreconditionError("dominating index must be >= 1");
  return Element::constant(space, Rational(static_cast<unsigned long>(m)));
}

// --- witness addresses ------------------------------------------------------

void validate_address(const Ordinal& stage, const std::vector<Ordinal>& address) {
  if (address.empty()) throw PreconditionError("witness address must be nonempty");
  if (!(address.front() < stage)) {
    throw PreconditionError("address head " + address.front().str() +
                            " is not below stage " + stage.str());
  }
  for (std::size_t i = 1; i < address.size(); ++i) {
    if (!(address[i] < address[i - 1])) {
      throw PreconditionError("witness address must strictly decrease");
    }
  }
}

std::vector<Ordinal> normalize_address(const Ordinal& stage,
                                       const std::vector<Ordinal>& address) {
  validate_address(stage, address);
  const Space space(stage);
  switch (space.kind()) {
    case SpaceKind::kBase:
      return {Ordinal()};
    case SpaceKind::kSucc: {
      const Ordinal beta = predecessor(stage);
      std::vector<Ordinal> out{beta};
      if (address.size() > 1) {
        auto rest = normalize_address(
            beta, std::vector<Ordinal>(address.begin() + 1, address.end()));
        out.insert(out.end(), rest.begin(), rest.end());
      }
      return out;
    }
    case SpaceKind::kLimit:
      return address;
  }
  return address;
}

namespace {

std::string address_key(const Ordinal& stage, const std::vector<Ordinal>& address) {
  std::string key = stage.str();
  for (const auto& g : address) key += "|" + g.str();
  return key;
}

struct LabelMemo {
  std::mutex mu;
  std::map<std::string, Element> labels;
};

LabelMemo& label_memo() {
  static LabelMemo memo;
  return memo;
}

}  // namespace

Element witness_label(const Ordinal& stage, const std::vector<Ordinal>& address) {
  const auto normal = normalize_address(stage, address);
  const std::string key = address_key(stage, normal);
  {
    std::lock_guard<std::mutex> lock(label_memo().mu);
    if (auto it = label_memo().labels.find(key); it != label_memo().labels.end()) {
      return it->second;
    }
  }
  const Space space(stage);
  Element out;
  switch (space.kind()) {
    case SpaceKind::kBase:
      out = one(space);
      break;
    case SpaceKind::kSucc: {
      const Space inner = space.inner();
      out = normal.size() == 1
                ? z_seq(inner, 1).restaged(space)
                : witness_label(inner.stage(),
                                std::vector<Ordinal>(normal.begin() + 1, normal.end()))
                      .restaged(space);
      break;
    }
    case SpaceKind::kLimit: {
      const std::uint64_t k = start_index(stage, normal.front());
      std::vector<Element> comps;
      comps.reserve(k - 1);
      for (std::uint64_t m = 1; m < k; ++m) comps.push_back(Element::zero(space.child(m)));
      out = Element::limit(space, std::move(comps), TailExpr::branch(normal));
      break;
    }
  }
  std::lock_guard<std::mutex> lock(label_memo().mu);
  return label_memo().labels.emplace(key, out).first->second;
}

std::vector<Element> witness_string(const Ordinal& stage,
                                    const std::vector<Ordinal>& address) {
  validate_address(stage, address);
  std::vector<Element> out;
  out.reserve(address.size());
  for (std::size_t i = 1; i <= address.size(); ++i) {
    out.push_back(witness_label(
        stage, std::vector<Ordinal>(address.begin(), address.begin() + i)));
  }
  return out;
}

Ordinal address_rank_floor(const Ordinal& stage,
                           const std::vector<Ordinal>& address) {
  if (address.empty()) return stage;
  validate_address(stage, address);
  return address.back();
}

bool in_sphere_S(const Element& x, int sample_budget) {
  if (!leq(Element::zero(x.space()), x, sample_budget).is_true()) return false;
  if (phi(x) != Rational(1)) return false;
  const NormBound b = norm_bounds(x, sample_budget);
  return b.lower == Rational(1) && b.upper == Rational(1);
}

// --- dense sets -------------------------------------------------------------

std::optional<Element> DenseSet::find_in_ball(const Element& center,
                                              const Rational& radius,
                                              std::uint64_t budget) const {
  for (std::uint64_t i = 1; i <= budget; ++i) {
    Element e = at(i);
    if (norm_upper(sub(e, center)) < radius) return e;
  }
  return std::nullopt;
}

namespace {

// Decodes n into a finite list of naturals: first the length-1, then
// entries, the last entry taking whatever remains.
std::vector<std::uint64_t> decode_list(std::uint64_t n) {
  auto [len, rest] = cantor_unpair(n);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < len; ++i) {
    auto [head, tail] = cantor_unpair(rest);
    out.push_back(head);
    rest = tail;
  }
  out.push_back(rest);
  return out;
}

Rational natural_rational(std::uint64_t code) {
  return code == 0 ? Rational(0) : calkin_wilf(code);
}

Element from_entries(const Space& space, const std::vector<Rational>& entries) {
  std::vector<Rational> prefix(entries.begin(), entries.end() - 1);
  Element e = Element::base(space, std::move(prefix), entries.back());
  if (is_zero(e)) return one(space);
  return e;
}

}  // namespace

Element DiagonalRationalSet::at(std::uint64_t index) const {
  if (index == 0) throw PreconditionError("dense-set index must be >= 1");
  std::vector<Rational> entries;
  for (auto code : decode_list(index - 1)) entries.push_back(natural_rational(code));
  return from_entries(space(), entries);
}

Element SpikesPlusConstantsSet::at(std::uint64_t index) const {
  if (index == 0) throw PreconditionError("dense-set index must be >= 1");
  const auto [a, b] = cantor_unpair(index - 1);
  if (a == 0 && b == 0) return one(space());
  Element out = Element::constant(space(), natural_rational(b));
  if (a > 0) out = add(out, pi_basis(space(), a));
  return out;
}

Element DyadicGridSet::at(std::uint64_t index) const {
  if (index == 0) throw PreconditionError("dense-set index must be >= 1");
  const auto [level, rest] = cantor_unpair(index - 1);
  const Rational unit = Rational(1) / power(Rational(2), static_cast<unsigned>(level));
  std::vector<Rational> entries;
  for (auto code : decode_list(rest)) {
    entries.push_back(unit * Rational(static_cast<unsigned long>(code)));
  }
  return from_entries(space(), entries);
}

std::optional<Element> DyadicGridSet::find_in_ball(const Element& center,
                                                   const Rational& radius,
                                                   std::uint64_t budget) const {
  if (!(center.space() == space())) throw SpaceMismatch("center outside the dense set's space");
  if (radius.sign() <= 0) return std::nullopt;
  unsigned level = 0;
  while (Rational(1) / power(Rational(2), level) > radius) ++level;
  // Rounding every entry down moves each coordinate by less than 2^-level,
  // and the norm never exceeds the sup-norm.
  for (std::uint64_t attempt = 0; attempt <= budget; ++attempt, ++level) {
    const Rational unit = Rational(1) / power(Rational(2), level);
    auto round = [&unit](const Rational& t) {
      return Rational(mpq_class((t / unit).floor())) * unit;
    };
    std::vector<Rational> prefix;
    for (const auto& t : center.prefix()) prefix.push_back(round(t));
    Element e = Element::base(space(), std::move(prefix), round(center.tail_value()));
    if (!is_zero(e) && leq(Element::zero(space()), e).is_true()) return e;
  }
  return std::nullopt;
}

ListDenseSet::ListDenseSet(Space space, std::vector<Element> items)
    : DenseSet(std::move(space)), items_(std::move(items)) {
  if (items_.empty()) throw PreconditionError("list dense set must be nonempty");
}

Element ListDenseSet::at(std::uint64_t index) const {
  if (index == 0) throw PreconditionError("dense-set index must be >= 1");
  return items_[(index - 1) % items_.size()];
}

}  // namespace fatou
