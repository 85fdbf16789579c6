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

#include "fatou/ordinal.h"

#include <cctype>
#include <limits>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "fatou/errors.h"

namespace fatou {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) {
    throw PreconditionError("ordinal coefficient overflow");
  }
  return a + b;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b) {
    throw PreconditionError("ordinal coefficient overflow");
  }
  return a * b;
}

}  // namespace

Ordinal Ordinal::finite(std::uint64_t n) {
  Ordinal out;
  if (n > 0) {
    out.exponents_.emplace_back();
    out.coefficients_.push_back(n);
  }
  return out;
}

Ordinal Ordinal::omega() { return monomial(finite(1)); }

Ordinal Ordinal::monomial(Ordinal exponent, std::uint64_t coefficient) {
  if (coefficient == 0) throw PreconditionError("CNF coefficient must be >= 1");
  Ordinal out;
  out.exponents_.push_back(std::move(exponent));
  out.coefficients_.push_back(coefficient);
  return out;
}

bool Ordinal::is_finite() const {
  return is_zero() || (num_terms() == 1 && exponents_[0].is_zero());
}

std::uint64_t Ordinal::to_finite() const {
  if (!is_finite()) throw PreconditionError("ordinal " + str() + " is infinite");
  return is_zero() ? 0 : coefficients_[0];
}

std::strong_ordering Ordinal::compare(const Ordinal& a, const Ordinal& b) {
  const std::size_t n = std::min(a.num_terms(), b.num_terms());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = compare(a.exponents_[i], b.exponents_[i]); c != 0) return c;
    if (auto c = a.coefficients_[i] <=> b.coefficients_[i]; c != 0) return c;
  }
  return a.num_terms() <=> b.num_terms();
}

Ordinal operator+(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  Ordinal out;
  const Ordinal& lead = b.exponents_[0];
  // Terms of a below b's leading exponent are absorbed.
  for (std::size_t i = 0; i < a.num_terms(); ++i) {
    const auto c = Ordinal::compare(a.exponents_[i], lead);
    if (c > 0) {
      out.exponents_.push_back(a.exponents_[i]);
      out.coefficients_.push_back(a.coefficients_[i]);
    } else if (c == 0) {
      out.exponents_.push_back(lead);
      out.coefficients_.push_back(
          checked_add(a.coefficients_[i], b.coefficients_[0]));
      for (std::size_t j = 1; j < b.num_terms(); ++j) {
        out.exponents_.push_back(b.exponents_[j]);
        out.coefficients_.push_back(b.coefficients_[j]);
      }
      return out;
    } else {
      break;
    }
  }
  for (std::size_t j = 0; j < b.num_terms(); ++j) {
    out.exponents_.push_back(b.exponents_[j]);
    out.coefficients_.push_back(b.coefficients_[j]);
  }
  return out;
}

std::string Ordinal::str() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < num_terms(); ++i) {
    if (i > 0) out += "+";
    const Ordinal& e = exponents_[i];
    const std::uint64_t c = coefficients_[i];
    if (e.is_zero()) {
      out += std::to_string(c);
      continue;
    }
    out += "w";
    if (e != finite(1)) {
      const bool simple = e.is_finite() ||
                          (e.num_terms() == 1 && e.coefficients_[0] == 1);
      out += "^";
      out += simple ? e.str() : "(" + e.str() + ")";
    }
    if (c != 1) out += "*" + std::to_string(c);
  }
  return out;
}

std::strong_ordering compare(const Ordinal& a, const Ordinal& b) {
  return a <=> b;
}

Ordinal successor(const Ordinal& a) { return a + Ordinal::finite(1); }

Classification classify(const Ordinal& a) {
  if (a.is_zero()) return {OrdinalKind::kZero, std::nullopt};
  const std::size_t last = a.num_terms() - 1;
  if (!a.exponent(last).is_zero()) return {OrdinalKind::kLimit, std::nullopt};
  // Rebuild a with its trailing finite coefficient decremented.
  Ordinal pred;
  for (std::size_t i = 0; i < last; ++i) {
    pred = pred + Ordinal::monomial(a.exponent(i), a.coefficient(i));
  }
  pred = pred + Ordinal::finite(a.coefficient(last) - 1);
  return {OrdinalKind::kSuccessor, std::move(pred)};
}

bool is_limit(const Ordinal& a) { return classify(a).kind == OrdinalKind::kLimit; }

Ordinal predecessor(const Ordinal& a) {
  auto c = classify(a);
  if (c.kind != OrdinalKind::kSuccessor) {
    throw PreconditionError("ordinal " + a.str() + " has no predecessor");
  }
  return *c.predecessor;
}

Ordinal fundamental_sequence(const Ordinal& a, std::uint64_t n) {
  if (n == 0) throw PreconditionError("fundamental sequence index must be >= 1");
  if (classify(a).kind != OrdinalKind::kLimit) {
    throw PreconditionError("fundamental sequence of non-limit " + a.str());
  }
  const std::size_t last = a.num_terms() - 1;
  // a = head + w^e, where head keeps every term and one copy of the last.
  Ordinal head;
  for (std::size_t i = 0; i < last; ++i) {
    head = head + Ordinal::monomial(a.exponent(i), a.coefficient(i));
  }
  const Ordinal& e = a.exponent(last);
  if (a.coefficient(last) > 1) {
    head = head + Ordinal::monomial(e, a.coefficient(last) - 1);
  }
  const Classification ce = classify(e);
  if (ce.kind == OrdinalKind::kSuccessor) {
    return head + Ordinal::monomial(*ce.predecessor, n);
  }
  return head + Ordinal::monomial(fundamental_sequence(e, n));
}

std::pair<Ordinal, std::uint64_t> split_finite(const Ordinal& a) {
  if (a.is_zero()) return {Ordinal(), 0};
  const std::size_t last = a.num_terms() - 1;
  if (!a.exponent(last).is_zero()) return {a, 0};
  Ordinal head;
  for (std::size_t i = 0; i < last; ++i) {
    head = head + Ordinal::monomial(a.exponent(i), a.coefficient(i));
  }
  return {head, a.coefficient(last)};
}

std::uint64_t start_index(const Ordinal& limit, const Ordinal& below) {
  if (!(below < limit)) {
    throw PreconditionError("start_index: " + below.str() + " is not below " +
                            limit.str());
  }
  std::uint64_t k = 1;
  // Linear scan: terminates because the sequence is cofinal in limit.
  while (!(below < fundamental_sequence(limit, k))) ++k;
  return k;
}

std::ostream& operator<<(std::ostream& os, const Ordinal& a) {
  return os << a.str();
}

// --- parser -----------------------------------------------------------------

namespace {

class OrdinalParser {
 public:
  explicit OrdinalParser(std::string_view text) : text_(text) {}

  Ordinal parse() {
    Ordinal out = sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "ordinal parse error at column " << pos_ + 1 << ": " << what
        << " in '" << text_ << "'";
    throw ParseError(msg.str());
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept_omega() {
    skip_ws();
    if (text_.substr(pos_, 5) == "omega") {
      pos_ += 5;
      return true;
    }
    if (text_.substr(pos_, 2) == "\xCF\x89") {  // UTF-8 lowercase omega
      pos_ += 2;
      return true;
    }
    if (pos_ < text_.size() && text_[pos_] == 'w') {
      ++pos_;
      return true;
    }
    return false;
  }

  std::optional<std::uint64_t> integer() {
    skip_ws();
    const std::size_t start = pos_;
    std::uint64_t value = 0;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = checked_add(checked_mul(value, 10),
                          static_cast<std::uint64_t>(text_[pos_] - '0'));
      ++pos_;
    }
    if (pos_ == start) return std::nullopt;
    return value;
  }

  Ordinal sum() {
    Ordinal out = product();
    while (accept('+')) out = out + product();
    return out;
  }

  Ordinal product() {
    Ordinal base = primary();
    if (accept('*')) {
      auto n = integer();
      if (!n) fail("expected integer multiplier");
      return multiply(base, *n);
    }
    return base;
  }

  // base * n for natural n, by repeated addition on the leading term.
  static Ordinal multiply(const Ordinal& base, std::uint64_t n) {
    if (n == 0 || base.is_zero()) return Ordinal::zero();
    if (base.is_finite()) return Ordinal::finite(checked_mul(base.to_finite(), n));
    // (w^e*c + rest) * n = w^e*(c*n) + rest.
    Ordinal out = Ordinal::monomial(base.exponent(0),
                                    checked_mul(base.coefficient(0), n));
    for (std::size_t i = 1; i < base.num_terms(); ++i) {
      out = out + Ordinal::monomial(base.exponent(i), base.coefficient(i));
    }
    return out;
  }

  Ordinal primary() {
    if (accept('(')) {
      Ordinal inner = sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (accept_omega()) {
      if (accept('^')) return Ordinal::monomial(exponent());
      return Ordinal::omega();
    }
    if (auto n = integer()) return Ordinal::finite(*n);
    fail("expected integer, 'w' or '('");
  }

  Ordinal exponent() {
    if (accept('(')) {
      Ordinal inner = sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (accept_omega()) {
      if (accept('^')) return Ordinal::monomial(exponent());
      return Ordinal::omega();
    }
    if (auto n = integer()) return Ordinal::finite(*n);
    fail("expected exponent");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Ordinal Ordinal::parse(std::string_view text) { return OrdinalParser(text).parse(); }

// --- JSON -------------------------------------------------------------------

void to_json(nlohmann::json& j, const Ordinal& a) {
  j = nlohmann::json::array();
  for (std::size_t i = 0; i < a.num_terms(); ++i) {
    nlohmann::json e;
    to_json(e, a.exponent(i));
    j.push_back(nlohmann::json::array({e, a.coefficient(i)}));
  }
}

void from_json(const nlohmann::json& j, Ordinal& a) {
  if (!j.is_array()) throw ParseError("ordinal JSON must be an array");
  Ordinal out;
  std::optional<Ordinal> previous;
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2 || !term[1].is_number_unsigned()) {
      throw ParseError("ordinal term must be [exponent, coefficient]");
    }
    Ordinal e;
    from_json(term[0], e);
    const auto c = term[1].get<std::uint64_t>();
    if (c == 0) throw ParseError("ordinal coefficient must be >= 1");
    if (previous && !(e < *previous)) {
      throw ParseError("ordinal exponents must be strictly decreasing");
    }
    previous = e;
    out = out + Ordinal::monomial(std::move(e), c);
  }
  a = std::move(out);
}

}  // namespace fatou
