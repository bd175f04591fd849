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

#ifndef NORBIP_TYPES_HPP_
#define NORBIP_TYPES_HPP_

#include <Eigen/Core>

#include "norbip/rational.hpp"

namespace norbip {

using Index = Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RationalVector = VectorX<Rational>;
using RationalMatrix = MatrixX<Rational>;

inline bool vec_eq(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) return false;
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return false;
  }
  return true;
}

/// Exact lexicographic order, used wherever deterministic output order of
/// rational vectors is required.
inline bool lex_less(const RationalVector& a, const RationalVector& b) {
  const Index n = a.size() < b.size() ? a.size() : b.size();
  for (Index i = 0; i < n; ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return a.size() < b.size();
}

}  // namespace norbip

#endif  // NORBIP_TYPES_HPP_
