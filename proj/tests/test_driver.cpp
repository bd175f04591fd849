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

#include "catch2/catch_amalgamated.hpp"
#include "json.hpp"
#include "norbip/driver.hpp"
#include "norbip/generator.hpp"
#include "norbip/oracle.hpp"
#include "test_helpers.hpp"

using namespace norbip;
using norbip::testing::bounded_example;
using norbip::testing::rvec;
using norbip::testing::tilted_wedge_example;

TEST_CASE("tilted wedge at delta 1/10 moves the leader to 1/2") {
  const SolveOutcome out = norvep(tilted_wedge_example(), Rational(1, 10));
  REQUIRE(out.status == SolveStatus::Optimal);
  REQUIRE(out.solution.has_value());
  CHECK(out.solution->x(0) == Rational(1, 2));
  CHECK(out.solution->v(0) == Rational(21, 20));
  CHECK(*out.objective == Rational(1, 2));
  // Certificates must reproduce the disjunct row exactly.
  REQUIRE(out.solution->certificates.size() == 1);
  const auto& cert = out.solution->certificates[0];
  CHECK(cert.alpha(0) >= Rational(0));
  CHECK(cert.beta >= Rational(0));
}

TEST_CASE("bounded example at delta 0 matches the optimistic optimum") {
  const SolveOutcome out = norvep(bounded_example(), Rational(0));
  REQUIRE(out.status == SolveStatus::Optimal);
  CHECK(*out.objective == Rational(-29));
  CHECK(out.solution->x(0) == Rational(1));
  CHECK(out.solution->v(0) == Rational(3));
  CHECK(out.optimistic_objective.has_value());
  CHECK(*out.optimistic_objective == Rational(-29));
  CHECK(out.vertex_counts == std::vector<Index>{1, 1});
  // Stage log reaches the extended formulation.
  REQUIRE(!out.stage_timings.empty());
  CHECK(out.stage_timings.back().stage == "extended_formulation");
}

TEST_CASE("solution certificates satisfy the dual vertex inequality exactly") {
  const BilevelInstance inst = bounded_example();
  const Rational delta(1, 2);
  const SolveOutcome out = norvep(inst, delta);
  REQUIRE(out.status == SolveStatus::Optimal);
  const Solution& sol = *out.solution;
  CHECK(sol.upper_objective == inst.c_x.dot(sol.x) + inst.c_y.dot(sol.v));
  CHECK(sol.lower_objective == inst.d.dot(sol.v));
  // Exact zero complementarity products.
  const RationalVector slack = inst.b - inst.A * sol.x - inst.B * sol.v;
  for (Index i = 0; i < inst.m_l; ++i) CHECK((slack(i) * sol.lambda(i)).is_zero());
  for (Index j = 0; j < inst.n_l; ++j) CHECK((sol.v(j) * sol.sigma(j)).is_zero());
  // Certificate rows hold with the solved delta.
  const RationalVector gx = inst.G * sol.x;
  for (Index k = 0; k < inst.m_u; ++k) {
    const auto& cert = sol.certificates[k];
    const Rational lhs =
        cert.alpha.dot(inst.b - inst.A * sol.x) + cert.beta * (inst.d.dot(sol.v) + delta);
    CHECK(lhs <= inst.q(k) - gx(k));
  }
}

TEST_CASE("early termination statuses") {
  SECTION("empty dual adversarial polyhedron") {
    // H_1 > 0 with B and d zero makes B^T alpha + beta d >= H_1 unsatisfiable.
    BilevelInstance inst = bounded_example();
    inst.B.setConstant(Rational(0));
    inst.d.setConstant(Rational(0));
    const SolveOutcome out = norvep(inst, Rational(1));
    CHECK(out.status == SolveStatus::DualAdversarialInfeasible);
    CHECK(out.failed_k == 0);
    CHECK(out.stage_timings.size() == 1);
  }

  SECTION("infeasible high-point relaxation") {
    BilevelInstance inst = bounded_example();
    inst.G.setConstant(Rational(0));
    inst.H.setConstant(Rational(0));
    inst.q.setConstant(Rational(-1));
    const SolveOutcome out = norvep(inst, Rational(1));
    CHECK(out.status == SolveStatus::HPRInfeasible);
  }

  SECTION("infeasible optimistic stage") {
    // Upper row v >= 6: the follower's best response never reaches 6 inside
    // the remaining upper row, but the joint (high-point) polytope still
    // contains points such as (0, 6).
    BilevelInstance inst = bounded_example();
    inst.G(0, 0) = Rational(0);
    inst.H(0, 0) = Rational(-1);
    inst.q(0) = Rational(-6);
    const SolveOutcome out = norvep(inst, Rational(0));
    CHECK(out.status == SolveStatus::OptimisticInfeasible);
  }

  SECTION("extended stage infeasibility is distinct") {
    const SolveOutcome out = norvep(bounded_example(), Rational(6));
    CHECK(out.status == SolveStatus::NORBiPInfeasible);
    CHECK(out.optimistic_objective.has_value());
  }
}

TEST_CASE("negative delta reroutes to the plain optimistic problem") {
  const SolveOutcome out = norvep(bounded_example(), Rational(-1));
  REQUIRE(out.status == SolveStatus::Optimal);
  CHECK(*out.objective == Rational(-29));
  CHECK(out.solution->certificates.empty());
  CHECK(out.vertex_counts.empty());  // step 1 skipped
}

TEST_CASE("delta_rel derives the tolerance from the optimistic lower objective") {
  // Optimistic solution of the bounded example has d.v = 3, so
  // delta = max(1/20, 1/10 * 3) = 3/10.
  SolverOptions options;
  options.delta_rel = Rational(1, 10);
  const SolveOutcome rel = norvep(bounded_example(), Rational(0), options);
  const SolveOutcome fixed = norvep(bounded_example(), Rational(3, 10));
  REQUIRE(rel.status == SolveStatus::Optimal);
  CHECK(*rel.objective == *fixed.objective);

  // Tiny relative factor falls back to the 1/20 floor.
  options.delta_rel = Rational(1, 1000);
  const SolveOutcome floor = norvep(bounded_example(), Rational(0), options);
  const SolveOutcome floor_fixed = norvep(bounded_example(), Rational(1, 20));
  CHECK(*floor.objective == *floor_fixed.objective);
}

TEST_CASE("check_robustness flags the optimistic point of the tilted wedge") {
  const BilevelInstance inst = tilted_wedge_example();
  const RobustnessReport report =
      check_robustness(inst, Rational(1, 10), rvec({Rational(0)}), rvec({Rational(1)}));
  REQUIRE(report.bilevel_feasible);
  REQUIRE(report.verdicts.size() == 1);
  CHECK_FALSE(report.verdicts[0].robust);
  CHECK(report.verdicts[0].worst_z(0) == Rational(9, 10));
  CHECK(*report.verdicts[0].violation == Rational(1, 10));
}

TEST_CASE("check_robustness verdicts cross the bounded example") {
  const BilevelInstance inst = bounded_example();
  const RobustnessReport report =
      check_robustness(inst, Rational(1), rvec({Rational(1)}), rvec({Rational(3)}));
  REQUIRE(report.bilevel_feasible);
  CHECK_FALSE(report.verdicts[0].robust);
  CHECK(*report.verdicts[0].violation == Rational(4));  // 16 > 12
  CHECK(report.verdicts[1].robust);
}

TEST_CASE("check_robustness rejects non-bilevel-feasible points") {
  const BilevelInstance inst = bounded_example();
  SECTION("not lower-level optimal") {
    const auto report =
        check_robustness(inst, Rational(0), rvec({Rational(1)}), rvec({Rational(4)}));
    CHECK_FALSE(report.bilevel_feasible);
    CHECK(report.reason.find("lower-level optimum") != std::string::npos);
  }
  SECTION("violates lower-level rows") {
    const auto report =
        check_robustness(inst, Rational(0), rvec({Rational(1)}), rvec({Rational(1)}));
    CHECK_FALSE(report.bilevel_feasible);
  }
  SECTION("negative component") {
    const auto report =
        check_robustness(inst, Rational(0), rvec({Rational(-1)}), rvec({Rational(3)}));
    CHECK_FALSE(report.bilevel_feasible);
  }
}

TEST_CASE("vacuous robustness for negative delta") {
  const RobustnessReport report = check_robustness(bounded_example(), Rational(-2),
                                                   rvec({Rational(1)}), rvec({Rational(3)}));
  REQUIRE(report.bilevel_feasible);
  for (const auto& verdict : report.verdicts) {
    CHECK(verdict.robust);
    CHECK(verdict.vacuous);
  }
}

TEST_CASE("radius of the bounded example") {
  // The two disjunct rows 4(v+delta) <= 11+x and 2(v+delta) <= 13-x meet at
  // x = 5, v = 0 where both allow delta = 4. (The source text for this
  // example reports 5, which contradicts its own printed inequalities:
  // 4*delta <= 16 at x = 5.)
  const RadiusResult result = radius(bounded_example());
  REQUIRE(result.kind == RadiusResult::Kind::Finite);
  CHECK(result.value == Rational(4));

  // Maximality: feasible at the radius, infeasible just above.
  const SolveOutcome at = norvep(bounded_example(), Rational(4));
  REQUIRE(at.status == SolveStatus::Optimal);
  CHECK(at.solution->x(0) == Rational(5));
  CHECK(at.solution->v(0) == Rational(0));
  const Rational above = Rational(4) * (Rational(1) + Rational(1, 1000000)) + Rational(1, 1000000);
  CHECK(norvep(bounded_example(), above).status == SolveStatus::NORBiPInfeasible);
}

TEST_CASE("radius is infinite when the lower variables leave the upper rows") {
  BilevelInstance inst = bounded_example();
  inst.H.setConstant(Rational(0));
  const RadiusResult result = radius(inst);
  CHECK(result.kind == RadiusResult::Kind::Infinite);
}

TEST_CASE("radius of the tilted wedge is infinite") {
  // For x >= 10 the upper row holds for every nonnegative response, and the
  // dual vertex (alpha, beta) = (0, 0) certifies robustness independent of
  // delta (oracle sweep agrees: feasible at arbitrarily large tolerances).
  const RadiusResult result = radius(tilted_wedge_example());
  CHECK(result.kind == RadiusResult::Kind::Infinite);
  for (const Rational delta : {Rational(10), Rational(1000)}) {
    const auto tiny = oracle::solve_tiny(tilted_wedge_example(), delta);
    CHECK(tiny.status == SolveStatus::Optimal);
  }
}

TEST_CASE("norvep solutions pass their own robustness check") {
  for (const Rational delta : {Rational(0), Rational(1, 2), Rational(1), Rational(4)}) {
    const SolveOutcome out = norvep(bounded_example(), delta);
    REQUIRE(out.status == SolveStatus::Optimal);
    const RobustnessReport report =
        check_robustness(bounded_example(), delta, out.solution->x, out.solution->v);
    REQUIRE(report.bilevel_feasible);
    for (const auto& verdict : report.verdicts) CHECK(verdict.robust);
  }
}

TEST_CASE("solve_with_config applies the epigraph transforms") {
  using norbip::testing::follower_floor_toy;
  // The toy's lower response is always 0, so the objective-robust optimum
  // equals the optimistic (and pessimistic) value 0 for delta = 0.
  const BilevelInstance toy = follower_floor_toy();
  const SolveOutcome optimistic = norvep(toy, Rational(-1));
  REQUIRE(optimistic.status == SolveStatus::Optimal);
  CHECK(*optimistic.objective == Rational(0));

  RobustnessConfig config{Rational(0), RobustMode::ObjectiveRobust};
  const SolveOutcome objective_robust = solve_with_config(toy, config);
  REQUIRE(objective_robust.status == SolveStatus::Optimal);
  CHECK(*objective_robust.objective == Rational(0));

  config.mode = RobustMode::Conservative;
  const SolveOutcome conservative = solve_with_config(toy, config);
  REQUIRE(conservative.status == SolveStatus::Optimal);
  CHECK(*conservative.objective == Rational(0));
}

TEST_CASE("objective-robust optimum equals the optimistic one when c_y is 0") {
  // With c_y = 0 the epigraph row tau >= c_x.x is independent of the
  // adversarial response, so the objective-robust value matches the
  // optimistic one (and is independent of delta). Vacuous upper rows keep
  // the comparison clean: the non-conservative transform carries only the
  // tau row.
  BilevelInstance inst;
  inst.name = "cy_zero";
  inst.n_u = 1;
  inst.n_l = 1;
  inst.m_u = 1;
  inst.m_l = 1;
  inst.c_x = rvec({Rational(1)});
  inst.c_y = rvec({Rational(0)});
  inst.G = RationalMatrix::Zero(1, 1);
  inst.H = RationalMatrix::Zero(1, 1);
  inst.q = rvec({Rational(0)});
  inst.A = RationalMatrix(1, 1);
  inst.A << Rational(-1);  // y >= 1 - x
  inst.B = RationalMatrix(1, 1);
  inst.B << Rational(-1);
  inst.b = rvec({Rational(-1)});
  inst.d = rvec({Rational(1)});

  const SolveOutcome optimistic = norvep(inst, Rational(-1));
  REQUIRE(optimistic.status == SolveStatus::Optimal);
  for (const Rational delta : {Rational(0), Rational(3)}) {
    RobustnessConfig config{delta, RobustMode::ObjectiveRobust};
    const SolveOutcome robust = solve_with_config(inst, config);
    REQUIRE(robust.status == SolveStatus::Optimal);
    CHECK(*robust.objective == *optimistic.objective);
  }
}

TEST_CASE("stage 3 can be skipped by flag") {
  SolverOptions options;
  options.skip_optimistic_stage = true;
  const SolveOutcome out = norvep(bounded_example(), Rational(1, 2), options);
  REQUIRE(out.status == SolveStatus::Optimal);
  CHECK(*out.objective == Rational(-73, 3));
  CHECK_FALSE(out.optimistic_objective.has_value());
  for (const auto& timing : out.stage_timings)
    CHECK(timing.stage != "optimistic_relaxation");
}

TEST_CASE("disjunction rows certify robustness in both directions") {
  // On complementarity-feasible points, at least one dual vertex row holds
  // exactly when every adversarial optimum respects its bound.
  using norbip::oracle::vertices_by_subsets;
  int robust_points = 0, violated_points = 0;
  const ScreenedBatch batch = generate_screened({2, 2, 2, 2}, 31337, 25);
  for (const BilevelInstance& inst : batch.instances) {
    for (const Rational delta : {Rational(0), Rational(1, 2)}) {
      // Candidate comp-feasible points: the optimistic and robust optima.
      std::vector<std::pair<RationalVector, RationalVector>> points;
      const SolveOutcome optimistic = norvep(inst, Rational(-1));
      if (optimistic.status == SolveStatus::Optimal)
        points.push_back({optimistic.solution->x, optimistic.solution->v});
      const SolveOutcome robust = norvep(inst, delta);
      if (robust.status == SolveStatus::Optimal)
        points.push_back({robust.solution->x, robust.solution->v});

      for (const auto& [x, v] : points) {
        const RationalVector gx = inst.G * x;
        bool all_rows_hold = true;
        for (Index k = 0; k < inst.m_u; ++k) {
          bool some_row_holds = false;
          for (const RationalVector& vert :
               vertices_by_subsets(build_dual_polyhedron(inst, k))) {
            const Rational lhs = vert.head(inst.m_l).dot(inst.b - inst.A * x) +
                                 vert(inst.m_l) * (inst.d.dot(v) + delta);
            if (lhs <= inst.q(k) - gx(k)) {
              some_row_holds = true;
              break;
            }
          }
          if (!some_row_holds) all_rows_hold = false;
        }
        const RobustnessReport report = check_robustness(inst, delta, x, v);
        REQUIRE(report.bilevel_feasible);
        bool all_robust = true;
        for (const auto& verdict : report.verdicts)
          if (!verdict.robust) all_robust = false;
        CHECK(all_rows_hold == all_robust);
        all_robust ? ++robust_points : ++violated_points;
      }
    }
  }
  CHECK(robust_points > 0);
  CHECK(violated_points > 0);
}

TEST_CASE("radius maximality on random screened instances") {
  const ScreenedBatch batch = generate_screened({2, 2, 2, 2}, 555, 15);
  int finite = 0;
  for (const BilevelInstance& inst : batch.instances) {
    const RadiusResult result = radius(inst);
    if (result.kind != RadiusResult::Kind::Finite) continue;
    ++finite;
    CHECK(norvep(inst, result.value).status == SolveStatus::Optimal);
    const Rational above =
        result.value * Rational(1000001, 1000000) + Rational(1, 1000000);
    CHECK(norvep(inst, above).status == SolveStatus::NORBiPInfeasible);
  }
  CHECK(finite > 0);
}

TEST_CASE("certificates are complete on random instances") {
  const ScreenedBatch batch = generate_screened({3, 3, 3, 3}, 808, 10);
  for (const BilevelInstance& inst : batch.instances) {
    const Rational delta(1, 10);
    const SolveOutcome out = norvep(inst, delta);
    if (out.status != SolveStatus::Optimal) continue;
    const Solution& sol = *out.solution;
    for (Index j = 0; j < inst.n_u; ++j) CHECK(sol.x(j) >= Rational(0));
    for (Index j = 0; j < inst.n_l; ++j) CHECK(sol.v(j) >= Rational(0));
    for (Index i = 0; i < inst.m_l; ++i) CHECK(sol.lambda(i) >= Rational(0));
    for (Index j = 0; j < inst.n_l; ++j) CHECK(sol.sigma(j) >= Rational(0));
    const RationalVector slack = inst.b - inst.A * sol.x - inst.B * sol.v;
    for (Index i = 0; i < inst.m_l; ++i) CHECK((slack(i) * sol.lambda(i)).is_zero());
    for (Index j = 0; j < inst.n_l; ++j) CHECK((sol.v(j) * sol.sigma(j)).is_zero());
    REQUIRE(static_cast<Index>(sol.certificates.size()) == inst.m_u);
    const RationalVector gx = inst.G * sol.x;
    for (Index k = 0; k < inst.m_u; ++k) {
      const auto& cert = sol.certificates[k];
      for (Index i = 0; i < inst.m_l; ++i) CHECK(cert.alpha(i) >= Rational(0));
      CHECK(cert.beta >= Rational(0));
      const Rational lhs =
          cert.alpha.dot(inst.b - inst.A * sol.x) + cert.beta * (inst.d.dot(sol.v) + delta);
      CHECK(lhs <= inst.q(k) - gx(k));
    }
  }
}

TEST_CASE("outcome serialization carries the certificates and timings") {
  const BilevelInstance inst = bounded_example();
  const Rational delta(1, 2);
  const SolveOutcome out = norvep(inst, delta);
  const std::string text = outcome_to_json_text(inst, delta, out);
  const auto doc = nlohmann::json::parse(text);
  CHECK(doc["status"] == "optimal");
  CHECK(doc["objective"] == "-73/3");
  CHECK(doc["objective_decimal"] == "-24.3333333333");
  CHECK(doc["solution"]["x"][0] == "11/9");
  CHECK(doc["solution"]["certificates"].size() == 2);
  CHECK(doc["vertex_counts"].size() == 2);
  CHECK(doc["stage_timings_us"].size() == 4);  // all four pipeline stages ran
  CHECK(doc["node_count"].get<std::int64_t>() > 0);
}
