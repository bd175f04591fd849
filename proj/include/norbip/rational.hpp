// Copyright 2026 The norbip authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NORBIP_RATIONAL_HPP_
#define NORBIP_RATIONAL_HPP_

#include <gmpxx.h>

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace norbip {

/// Arbitrary-precision rational scalar. Always kept in canonical form
/// (positive denominator, coprime numerator/denominator); every operation
/// is exact. This is the numeric type of the whole library.
class Rational {
 public:
  Rational() : value_(0) {}
  Rational(int n) : value_(n) {}                 // NOLINT: implicit by design
  Rational(long n) : value_(static_cast<long>(n)) {}  // NOLINT
  Rational(std::int64_t n, std::int64_t d);
  Rational(const mpz_class& n, const mpz_class& d);
  explicit Rational(mpq_class q);

  /// Parses "p/q", a decimal literal ("0.25", "-3.5"), or an integer.
  /// Throws std::invalid_argument on malformed input or zero denominator.
  static Rational parse(const std::string& text);

  const mpz_class& numerator() const { return value_.get_num(); }
  const mpz_class& denominator() const { return value_.get_den(); }
  bool is_zero() const { return sgn(value_) == 0; }
  int sign() const { return sgn(value_); }
  bool is_integer() const { return value_.get_den() == 1; }

  /// Canonical "p/q" form ("p" when the denominator is one).
  std::string str() const { return value_.get_str(); }

  Rational operator-() const { return Rational(mpq_class(-value_)); }
  Rational operator+(const Rational& o) const { return Rational(mpq_class(value_ + o.value_)); }
  Rational operator-(const Rational& o) const { return Rational(mpq_class(value_ - o.value_)); }
  Rational operator*(const Rational& o) const { return Rational(mpq_class(value_ * o.value_)); }
  Rational operator/(const Rational& o) const;

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

  bool operator==(const Rational& o) const { return value_ == o.value_; }
  bool operator!=(const Rational& o) const { return value_ != o.value_; }
  bool operator<(const Rational& o) const { return value_ < o.value_; }
  bool operator<=(const Rational& o) const { return value_ <= o.value_; }
  bool operator>(const Rational& o) const { return value_ > o.value_; }
  bool operator>=(const Rational& o) const { return value_ >= o.value_; }

  friend Rational abs(const Rational& r) { return Rational(mpq_class(::abs(r.value_))); }
  friend Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
  friend Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  mpq_class value_;
};

/// Decimal rendering with `significant` significant digits, exact integer
/// arithmetic throughout (scientific notation for large magnitudes). Meant
/// for plotting-convenience columns, not for round-tripping.
std::string to_decimal_string(const Rational& r, int significant = 12);

}  // namespace norbip

namespace Eigen {

template <>
struct NumTraits<norbip::Rational> : GenericNumTraits<norbip::Rational> {
  typedef norbip::Rational Real;
  typedef norbip::Rational NonInteger;
  typedef norbip::Rational Nested;
  static inline Real epsilon() { return norbip::Rational(0); }
  static inline Real dummy_precision() { return norbip::Rational(0); }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 120,
    MulCost = 120,
  };
};

}  // namespace Eigen

#endif  // NORBIP_RATIONAL_HPP_
