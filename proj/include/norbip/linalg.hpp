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

#ifndef NORBIP_LINALG_HPP_
#define NORBIP_LINALG_HPP_

#include <optional>

#include "norbip/types.hpp"

namespace norbip {

/// Exact rank via Gaussian elimination.
inline Index rank(RationalMatrix m) {
  Index r = 0;
  const Index rows = m.rows(), cols = m.cols();
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index pivot = -1;
    for (Index i = r; i < rows; ++i) {
      if (!m(i, c).is_zero()) { pivot = i; break; }
    }
    if (pivot < 0) continue;
    m.row(pivot).swap(m.row(r));
    for (Index i = r + 1; i < rows; ++i) {
      if (m(i, c).is_zero()) continue;
      const Rational f = m(i, c) / m(r, c);
      m.row(i) -= f * m.row(r);
    }
    ++r;
  }
  return r;
}

/// Solves A z = rhs exactly; returns the solution only when it is unique
/// (A has full column rank and the system is consistent).
inline std::optional<RationalVector> solve_unique(RationalMatrix a, RationalVector rhs) {
  const Index rows = a.rows(), cols = a.cols();
  std::vector<Index> pivot_col;
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index pivot = -1;
    for (Index i = r; i < rows; ++i) {
      if (!a(i, c).is_zero()) { pivot = i; break; }
    }
    if (pivot < 0) return std::nullopt;  // rank-deficient column: not unique
    a.row(pivot).swap(a.row(r));
    std::swap(rhs(pivot), rhs(r));
    for (Index i = 0; i < rows; ++i) {
      if (i == r || a(i, c).is_zero()) continue;
      const Rational f = a(i, c) / a(r, c);
      a.row(i) -= f * a.row(r);
      rhs(i) -= f * rhs(r);
    }
    pivot_col.push_back(c);
    ++r;
  }
  if (r < cols) return std::nullopt;
  for (Index i = r; i < rows; ++i) {
    if (!rhs(i).is_zero()) return std::nullopt;  // inconsistent
  }
  RationalVector z = RationalVector::Zero(cols);
  for (Index k = 0; k < r; ++k) z(pivot_col[k]) = rhs(k) / a(k, pivot_col[k]);
  return z;
}

/// For A with rank exactly cols-1, returns a nonzero z with A z = 0
/// (unique up to scale); otherwise nullopt.
inline std::optional<RationalVector> nullspace_direction(RationalMatrix a) {
  const Index rows = a.rows(), cols = a.cols();
  std::vector<Index> pivot_of_col(cols, -1);
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index pivot = -1;
    for (Index i = r; i < rows; ++i) {
      if (!a(i, c).is_zero()) { pivot = i; break; }
    }
    if (pivot < 0) continue;
    a.row(pivot).swap(a.row(r));
    for (Index i = 0; i < rows; ++i) {
      if (i == r || a(i, c).is_zero()) continue;
      const Rational f = a(i, c) / a(r, c);
      a.row(i) -= f * a.row(r);
    }
    pivot_of_col[c] = r;
    ++r;
  }
  if (r != cols - 1) return std::nullopt;
  Index free_col = -1;
  for (Index c = 0; c < cols; ++c) {
    if (pivot_of_col[c] < 0) { free_col = c; break; }
  }
  RationalVector z = RationalVector::Zero(cols);
  z(free_col) = Rational(1);
  for (Index c = 0; c < cols; ++c) {
    if (pivot_of_col[c] >= 0)
      z(c) = -a(pivot_of_col[c], free_col) / a(pivot_of_col[c], c);
  }
  return z;
}

}  // namespace norbip

#endif  // NORBIP_LINALG_HPP_
