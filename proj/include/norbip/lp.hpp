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

#ifndef NORBIP_LP_HPP_
#define NORBIP_LP_HPP_

#include <vector>

#include "norbip/types.hpp"

namespace norbip {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LpRow {
  RationalVector coeffs;
  Relation rel = Relation::LessEqual;
  Rational rhs;
};

/// Minimization LP: min c^T x subject to the rows, with per-variable lower
/// bound 0 (default) or -infinity (free_vars[j] = true).
struct LinearProgram {
  RationalVector objective;
  std::vector<LpRow> rows;
  std::vector<bool> free_vars;  // empty means every variable is nonnegative

  Index num_vars() const { return objective.size(); }
  bool is_free(Index j) const {
    return j < static_cast<Index>(free_vars.size()) && free_vars[j];
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Exact solve result. Dual sign convention for the minimization problem:
/// dual(i) <= 0 for LessEqual rows, >= 0 for GreaterEqual rows, free for
/// Equal rows; strong duality c^T primal = dual^T rhs holds exactly.
///
/// farkas (Infeasible): y with the dual sign pattern, (A^T y)_j <= 0 for
/// every nonnegative variable, = 0 for free variables, and y^T rhs > 0.
/// ray (Unbounded): direction r with c^T r < 0 that preserves feasibility
/// (row relations satisfied homogeneously, r_j >= 0 on nonnegative vars).
struct LpResult {
  LpStatus status = LpStatus::Optimal;
  RationalVector primal;
  RationalVector dual;
  Rational objective;
  std::vector<Index> basis;  // basic column indices of the internal equality form
  RationalVector farkas;
  RationalVector ray;
};

/// Two-phase primal simplex with Bland's rule over exact rationals.
/// Deterministic: identical inputs produce identical results including the
/// reported basis. Certificates are verified before being returned.
LpResult solve_lp(const LinearProgram& lp);

}  // namespace norbip

#endif  // NORBIP_LP_HPP_
