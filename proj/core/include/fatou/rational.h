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

#ifndef FATOU_RATIONAL_H_
#define FATOU_RATIONAL_H_

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace fatou {

// Exact rational scalar. Always stored in lowest terms with a positive
// denominator; equality is therefore structural.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT(runtime/explicit)
  Rational(int value) : value_(value) {}   // NOLINT(runtime/explicit)
  Rational(unsigned long value) : value_(value) {}  // NOLINT(runtime/explicit)
  Rational(long numerator, long denominator);
  explicit Rational(const mpq_class& value);

  // Accepts "p/q", "p" and "-p/q". Throws ParseError otherwise.
  static Rational parse(std::string_view text);
  // Always "p/q", including integers ("3/1").
  std::string str() const;

  const mpq_class& raw() const { return value_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }

  bool is_zero() const { return sgn(value_) == 0; }
  int sign() const { return sgn(value_); }
  double to_double() const { return value_.get_d(); }
  // floor(value), as a GMP integer.
  mpz_class floor() const;

  Rational operator-() const { return Rational(mpq_class(-value_)); }
  Rational& operator+=(const Rational& other);
  Rational& operator-=(const Rational& other);
  Rational& operator*=(const Rational& other);
  Rational& operator/=(const Rational& other);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }

 private:
  mpq_class value_{0};
};

Rational abs(const Rational& x);
Rational max(const Rational& a, const Rational& b);
Rational min(const Rational& a, const Rational& b);
Rational pos(const Rational& x);  // max(x, 0)
// base^exponent for a non-negative exponent.
Rational power(const Rational& base, unsigned exponent);

std::ostream& operator<<(std::ostream& os, const Rational& x);

}  // namespace fatou

#endif  // FATOU_RATIONAL_H_
