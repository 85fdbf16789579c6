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

#ifndef FATOU_ORDINAL_H_
#define FATOU_ORDINAL_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace fatou {

// An ordinal below epsilon_0 in Cantor normal form:
//
//   w^e_1 * c_1 + w^e_2 * c_2 + ... + w^e_k * c_k,   e_1 > e_2 > ... > e_k,
//
// with positive integer coefficients. The empty sum is 0. Normal forms are
// unique, so equality is structural.
class Ordinal {
 public:
  Ordinal() = default;  // zero

  static Ordinal zero() { return Ordinal(); }
  static Ordinal finite(std::uint64_t n);
  static Ordinal omega();
  // w^exponent * coefficient. coefficient must be >= 1.
  static Ordinal monomial(Ordinal exponent, std::uint64_t coefficient = 1);

  // Shorthand grammar, e.g. "w^2*3+w+5", "w^(w+1)", "w^w^2", "omega*2".
  //   sum     := product ('+' product)*
  //   product := primary ('*' INT)?
  //   primary := INT | ('w' | 'omega') ('^' exponent)? | '(' sum ')'
  //   exponent:= INT | ('w' | 'omega') ('^' exponent)? | '(' sum ')'
  // Terms are combined with ordinal addition, so "3+w" denotes w.
  static Ordinal parse(std::string_view text);

  std::size_t num_terms() const { return coefficients_.size(); }
  const Ordinal& exponent(std::size_t i) const { return exponents_[i]; }
  std::uint64_t coefficient(std::size_t i) const { return coefficients_[i]; }

  bool is_zero() const { return coefficients_.empty(); }
  bool is_finite() const;
  // Value of a finite ordinal. Throws PreconditionError otherwise.
  std::uint64_t to_finite() const;

  std::string str() const;

  friend bool operator==(const Ordinal& a, const Ordinal& b) = default;
  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
    return compare(a, b);
  }

  // Ordinal sum (not commutative).
  friend Ordinal operator+(const Ordinal& a, const Ordinal& b);

 private:
  static std::strong_ordering compare(const Ordinal& a, const Ordinal& b);

  std::vector<Ordinal> exponents_;
  std::vector<std::uint64_t> coefficients_;
};

enum class OrdinalKind { kZero, kSuccessor, kLimit };

struct Classification {
  OrdinalKind kind;
  // Set iff kind == kSuccessor.
  std::optional<Ordinal> predecessor;
};

std::strong_ordering compare(const Ordinal& a, const Ordinal& b);
Ordinal successor(const Ordinal& a);
Classification classify(const Ordinal& a);
bool is_limit(const Ordinal& a);
// Predecessor of a successor ordinal. Throws PreconditionError otherwise.
Ordinal predecessor(const Ordinal& a);

// The n-th term (n >= 1) of the canonical fundamental sequence of a limit:
//   g + w^(b+1)  ->  g + w^b * n
//   g + w^l      ->  g + w^fundamental_sequence(l, n)      (l a limit)
// Throws PreconditionError for zero/successor inputs or n == 0.
Ordinal fundamental_sequence(const Ordinal& a, std::uint64_t n);

// Splits a = lambda + n with lambda zero or a limit and n finite.
std::pair<Ordinal, std::uint64_t> split_finite(const Ordinal& a);

// Least k >= 1 with fundamental_sequence(limit, k) > below. Requires
// below < limit.
std::uint64_t start_index(const Ordinal& limit, const Ordinal& below);

std::ostream& operator<<(std::ostream& os, const Ordinal& a);

// JSON: nested array of [exponent, coefficient] pairs; 0 is [].
void to_json(nlohmann::json& j, const Ordinal& a);
void from_json(const nlohmann::json& j, Ordinal& a);

}  // namespace fatou

#endif  // FATOU_ORDINAL_H_
