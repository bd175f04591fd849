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

#include <optional>
#include <random>

#include "catch2/catch_amalgamated.hpp"
#include "norbip/linalg.hpp"
#include "norbip/lp.hpp"
#include "test_helpers.hpp"

using namespace norbip;
using norbip::testing::rvec;

namespace {

LpRow row(std::initializer_list<Rational> coeffs, Relation rel, Rational rhs) {
  return LpRow{rvec(coeffs), rel, rhs};
}

// Brute-force reference: evaluates all basic solutions (every n-subset of
// tight constraints among rows and nonnegativity bounds). For pointed
// feasible sets this finds the optimal value of any bounded LP and decides
// feasibility.
struct BruteForce {
  bool feasible = false;
  std::optional<Rational> best;
};

BruteForce brute_force(const LinearProgram& lp) {
  const Index n = lp.num_vars();
  std::vector<std::pair<RationalVector, Rational>> eqs;  // candidate tight rows
  for (const LpRow& r : lp.rows) eqs.push_back({r.coeffs, r.rhs});
  for (Index j = 0; j < n; ++j) {
    if (!lp.is_free(j)) {
      RationalVector e = RationalVector::Zero(n);
      e(j) = Rational(1);
      eqs.push_back({e, Rational(0)});
    }
  }
  auto feasible_point = [&](const RationalVector& x) {
    for (Index j = 0; j < n; ++j)
      if (!lp.is_free(j) && x(j) < Rational(0)) return false;
    for (const LpRow& r : lp.rows) {
      const Rational act = r.coeffs.dot(x);
      if (r.rel == Relation::LessEqual && act > r.rhs) return false;
      if (r.rel == Relation::GreaterEqual && act < r.rhs) return false;
      if (r.rel == Relation::Equal && act != r.rhs) return false;
    }
    return true;
  };

  BruteForce out;
  const Index total = static_cast<Index>(eqs.size());
  if (total < n) return out;
  std::vector<Index> idx(n);
  for (Index i = 0; i < n; ++i) idx[i] = i;
  while (true) {
    RationalMatrix a(n, n);
    RationalVector rhs(n);
    for (Index r = 0; r < n; ++r) {
      a.row(r) = eqs[idx[r]].first.transpose();
      rhs(r) = eqs[idx[r]].second;
    }
    if (auto x = solve_unique(a, rhs); x && feasible_point(*x)) {
      out.feasible = true;
      const Rational value = lp.objective.dot(*x);
      if (!out.best || value < *out.best) out.best = value;
    }
    Index i = n - 1;
    while (i >= 0 && idx[i] == total - n + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (Index j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

LinearProgram random_lp(std::mt19937_64& rng, Index n, Index m) {
  auto coeff = [&]() { return Rational(static_cast<std::int64_t>(rng() % 21) - 10, 1 + static_cast<std::int64_t>(rng() % 4)); };
  LinearProgram lp;
  lp.objective = RationalVector(n);
  for (Index j = 0; j < n; ++j) lp.objective(j) = coeff();
  for (Index i = 0; i < m; ++i) {
    LpRow r;
    r.coeffs = RationalVector(n);
    for (Index j = 0; j < n; ++j) r.coeffs(j) = coeff();
    r.rel = (rng() % 4 == 0) ? Relation::GreaterEqual : Relation::LessEqual;
    r.rhs = coeff();
    lp.rows.push_back(std::move(r));
  }
  return lp;
}

}  // namespace

TEST_CASE("fixed-leader adversarial toy solves to the wedge tip") {
  // min -y subject to y <= 1 + x/10 at x = 0.
  LinearProgram lp;
  lp.objective = rvec({Rational(-1)});
  lp.rows.push_back(row({Rational(1)}, Relation::LessEqual, Rational(1)));
  const LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.primal(0) == Rational(1));
  CHECK(res.objective == Rational(-1));
  CHECK(res.dual(0) == Rational(-1));
}

TEST_CASE("contradictory bounds are infeasible with a verified certificate") {
  // min 0 subject to y <= -1, y >= 0 (the sign bound is implicit).
  LinearProgram lp;
  lp.objective = rvec({Rational(0)});
  lp.rows.push_back(row({Rational(1)}, Relation::LessEqual, Rational(-1)));
  const LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Infeasible);
  REQUIRE(res.farkas.size() == 1);
  // Certificate validity is asserted inside solve_lp; spot-check the sign.
  CHECK(res.farkas(0) < Rational(0));
}

TEST_CASE("unbounded LP returns a verified improving ray") {
  LinearProgram lp;  // min -x1 - x2 s.t. x1 - x2 <= 1
  lp.objective = rvec({Rational(-1), Rational(-1)});
  lp.rows.push_back(row({Rational(1), Rational(-1)}, Relation::LessEqual, Rational(1)));
  const LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Unbounded);
  CHECK(lp.objective.dot(res.ray) < Rational(0));
}

TEST_CASE("free variables are handled through the split") {
  LinearProgram lp;  // min x, x free, x >= -5 as a row
  lp.objective = rvec({Rational(1)});
  lp.free_vars = {true};
  lp.rows.push_back(row({Rational(1)}, Relation::GreaterEqual, Rational(-5)));
  const LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.primal(0) == Rational(-5));
  CHECK(res.objective == Rational(-5));
}

TEST_CASE("equality rows produce exact free-signed duals") {
  LinearProgram lp;  // min x1 + 2 x2 s.t. x1 + x2 = 3
  lp.objective = rvec({Rational(1), Rational(2)});
  lp.rows.push_back(row({Rational(1), Rational(1)}, Relation::Equal, Rational(3)));
  const LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == Rational(3));
  CHECK(res.primal(0) == Rational(3));
  CHECK(res.dual(0) == Rational(1));
}

TEST_CASE("Bland's rule terminates on the classic cycling tableau") {
  // Beale's example, known to cycle under the most-negative-cost rule.
  LinearProgram lp;
  lp.objective = rvec({Rational(-3, 4), Rational(150), Rational(-1, 50), Rational(6)});
  lp.rows.push_back(row({Rational(1, 4), Rational(-60), Rational(-1, 25), Rational(9)},
                        Relation::LessEqual, Rational(0)));
  lp.rows.push_back(row({Rational(1, 2), Rational(-90), Rational(-1, 50), Rational(3)},
                        Relation::LessEqual, Rational(0)));
  lp.rows.push_back(row({Rational(0), Rational(0), Rational(1), Rational(0)},
                        Relation::LessEqual, Rational(1)));
  const LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  const BruteForce reference = brute_force(lp);
  REQUIRE(reference.best.has_value());
  CHECK(res.objective == *reference.best);
  CHECK(res.objective == Rational(-1, 20));
}

TEST_CASE("random LPs match the all-subsets reference and certify optimality") {
  std::mt19937_64 rng(20260809);
  int optimal = 0, infeasible = 0, unbounded = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const LinearProgram lp = random_lp(rng, 4, 4);
    // solve_lp verifies primal/dual feasibility, complementary slackness via
    // strong duality, and certificates before returning.
    const LpResult res = solve_lp(lp);
    const BruteForce reference = brute_force(lp);
    switch (res.status) {
      case LpStatus::Optimal:
        ++optimal;
        REQUIRE(reference.best.has_value());
        CHECK(res.objective == *reference.best);
        break;
      case LpStatus::Infeasible:
        ++infeasible;
        CHECK_FALSE(reference.feasible);
        break;
      case LpStatus::Unbounded:
        ++unbounded;
        CHECK(reference.feasible);
        break;
    }
  }
  // The mix should exercise all three statuses.
  CHECK(optimal > 10);
  CHECK(infeasible > 0);
  CHECK(unbounded > 0);
}

TEST_CASE("identical inputs give identical results including the basis") {
  std::mt19937_64 rng(99);
  const LinearProgram lp = random_lp(rng, 4, 5);
  const LpResult a = solve_lp(lp);
  const LpResult b = solve_lp(lp);
  REQUIRE(a.status == b.status);
  if (a.status == LpStatus::Optimal) {
    CHECK(vec_eq(a.primal, b.primal));
    CHECK(vec_eq(a.dual, b.dual));
    CHECK(a.basis == b.basis);
  }
}

TEST_CASE("all-zero rows do not disturb the solve") {
  LinearProgram lp;
  lp.objective = rvec({Rational(1)});
  lp.rows.push_back(row({Rational(0)}, Relation::LessEqual, Rational(0)));
  lp.rows.push_back(row({Rational(1)}, Relation::GreaterEqual, Rational(2)));
  const LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.primal(0) == Rational(2));
}
