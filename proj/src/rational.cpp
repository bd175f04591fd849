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

#include "norbip/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace norbip {

namespace {

mpz_class parse_integer(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty integer literal");
  try {
    return mpz_class(text, 10);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed integer literal '" + text + "'");
  }
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d)
    : Rational(mpz_class(std::to_string(n)), mpz_class(std::to_string(d))) {}

Rational::Rational(const mpz_class& n, const mpz_class& d) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  value_ = mpq_class(n, d);
  value_.canonicalize();
}

Rational::Rational(mpq_class q) : value_(std::move(q)) {}

Rational Rational::operator/(const Rational& o) const {
  if (o.is_zero()) throw std::domain_error("rational division by zero");
  return Rational(mpq_class(value_ / o.value_));
}

Rational Rational::parse(const std::string& text) {
  std::string t;
  t.reserve(text.size());
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  }
  if (t.empty()) throw std::invalid_argument("empty rational literal");

  if (auto slash = t.find('/'); slash != std::string::npos) {
    mpz_class num = parse_integer(t.substr(0, slash));
    mpz_class den = parse_integer(t.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return Rational(num, den);
  }

  if (auto dot = t.find('.'); dot != std::string::npos) {
    std::string head = t.substr(0, dot);
    std::string frac = t.substr(dot + 1);
    if (frac.empty()) throw std::invalid_argument("trailing '.' in '" + text + "'");
    for (char c : frac) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw std::invalid_argument("malformed decimal literal '" + text + "'");
    }
    bool negative = !head.empty() && head[0] == '-';
    if (!head.empty() && (head[0] == '-' || head[0] == '+')) head.erase(0, 1);
    if (head.empty()) head = "0";
    mpz_class num = parse_integer(head + frac);
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    if (negative) num = -num;
    return Rational(num, den);
  }

  return Rational(parse_integer(t), mpz_class(1));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.value_.get_str();
}

std::string to_decimal_string(const Rational& r, int significant) {
  if (significant < 1) significant = 1;
  if (r.is_zero()) return "0";

  const bool negative = r.sign() < 0;
  mpz_class p = ::abs(r.numerator());
  const mpz_class& q = r.denominator();

  // Decimal exponent e with 10^e <= p/q < 10^(e+1), found from digit counts
  // and corrected exactly.
  long e = static_cast<long>(mpz_sizeinbase(p.get_mpz_t(), 10)) -
           static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 10));
  auto pow10 = [](long k) {
    mpz_class v = 1;
    for (long i = 0; i < k; ++i) v *= 10;
    return v;
  };
  auto cmp_scaled = [&](long exp) {
    // sign of p/q - 10^exp
    if (exp >= 0) return cmp(p, q * pow10(exp));
    return cmp(p * pow10(-exp), q);
  };
  while (cmp_scaled(e) < 0) --e;
  while (cmp_scaled(e + 1) >= 0) ++e;

  // digits = round(p/q * 10^(significant-1-e)), then render as d.ddd e^e.
  long shift = significant - 1 - e;
  mpz_class num = p, den = q;
  if (shift >= 0) num *= pow10(shift);
  else den *= pow10(-shift);
  mpz_class digits = num / den, twice_rem = (num % den) * 2;
  if (cmp(twice_rem, den) >= 0) digits += 1;
  std::string ds = digits.get_str();
  if (static_cast<int>(ds.size()) > significant) {  // rounding carried over
    ds.pop_back();
    ++e;
  }
  while (ds.size() > 1 && ds.back() == '0') ds.pop_back();

  std::string out = negative ? "-" : "";
  if (e >= 0 && e <= 15) {
    if (static_cast<long>(ds.size()) <= e) {
      out += ds + std::string(e + 1 - ds.size(), '0');
    } else {
      out += ds.substr(0, e + 1) + "." + ds.substr(e + 1);
    }
  } else if (e < 0 && e >= -6) {
    out += "0." + std::string(-e - 1, '0') + ds;
  } else {
    out += ds.substr(0, 1);
    if (ds.size() > 1) out += "." + ds.substr(1);
    out += "e" + std::to_string(e);
  }
  return out;
}

}  // namespace norbip
