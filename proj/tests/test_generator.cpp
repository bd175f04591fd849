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

#include <sstream>

#include "catch2/catch_amalgamated.hpp"
#include "norbip/generator.hpp"
#include "norbip/lp.hpp"
#include "norbip/reformulations.hpp"
#include "norbip/vertex_enum.hpp"

using namespace norbip;

TEST_CASE("generation is deterministic per (dims, seed)") {
  const BilevelInstance a = generate({5, 5, 5, 5}, 17);
  const BilevelInstance b = generate({5, 5, 5, 5}, 17);
  CHECK(vec_eq(a.q, b.q));
  CHECK(vec_eq(a.d, b.d));
  for (Index i = 0; i < a.m_u; ++i)
    for (Index j = 0; j < a.n_u; ++j) CHECK(a.G(i, j) == b.G(i, j));
  const BilevelInstance c = generate({5, 5, 5, 5}, 18);
  bool any_diff = !vec_eq(a.q, c.q) || !vec_eq(a.d, c.d) || !vec_eq(a.b, c.b);
  CHECK(any_diff);
}

TEST_CASE("coefficients are zero with probability 3/5 and denominator 1e6 otherwise") {
  int zeros = 0, total = 0;
  auto tally = [&](const Rational& r) {
    ++total;
    if (r.is_zero()) {
      ++zeros;
    } else {
      CHECK(r >= Rational(0));
      CHECK(r <= Rational(1));
      CHECK(mpz_class(1000000) % r.denominator() == 0);
    }
  };
  for (std::uint64_t seed = 100; seed < 180; ++seed) {
    const BilevelInstance inst = generate({5, 5, 5, 5}, seed);
    for (const auto* m : {&inst.G, &inst.H, &inst.A, &inst.B})
      for (Index i = 0; i < m->rows(); ++i)
        for (Index j = 0; j < m->cols(); ++j) tally((*m)(i, j));
    for (const auto* v : {&inst.q, &inst.b, &inst.c_x, &inst.c_y, &inst.d})
      for (Index i = 0; i < v->size(); ++i) tally((*v)(i));
  }
  REQUIRE(total >= 10000);
  const double fraction = static_cast<double>(zeros) / static_cast<double>(total);
  CHECK(fraction > 0.57);
  CHECK(fraction < 0.63);
}

TEST_CASE("generator validates its output") {
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    CHECK(validate(generate({3, 4, 2, 5}, seed)).empty());
  CHECK_THROWS_AS(generate({0, 1, 1, 1}, 0), std::invalid_argument);
}

TEST_CASE("screened batches pass the first two pipeline stages") {
  const ScreenedBatch batch = generate_screened({2, 2, 2, 2}, 1, 12);
  REQUIRE(batch.instances.size() == 12);
  CHECK(batch.trials >= 12);
  for (const BilevelInstance& inst : batch.instances) {
    for (Index k = 0; k < inst.m_u; ++k)
      CHECK_FALSE(enumerate_vertices(build_dual_polyhedron(inst, k), k).empty);
    CHECK(solve_lp(build_hpr(inst)).status != LpStatus::Infeasible);
  }
  // Some seeds are rejected at these sizes.
  CHECK(batch.trials > static_cast<std::int64_t>(batch.instances.size()));

  std::ostringstream manifest;
  write_manifest_csv(manifest, {2, 2, 2, 2}, batch);
  const std::string text = manifest.str();
  CHECK(text.rfind("seed,n_u,n_l,m_u,m_l,kept,rejection_stage", 0) == 0);
  CHECK(text.find("rejected") != std::string::npos);
  CHECK(text.find("kept") != std::string::npos);
}

TEST_CASE("all-zero instances pass screening without incident") {
  // A degenerate draw where every coefficient is zero: the dual systems
  // contain the origin and the high-point relaxation is 0 <= 0.
  BilevelInstance inst = generate({2, 2, 2, 2}, 0);
  inst.G.setConstant(Rational(0));
  inst.H.setConstant(Rational(0));
  inst.q.setConstant(Rational(0));
  inst.A.setConstant(Rational(0));
  inst.B.setConstant(Rational(0));
  inst.b.setConstant(Rational(0));
  inst.c_x.setConstant(Rational(0));
  inst.c_y.setConstant(Rational(0));
  inst.d.setConstant(Rational(0));
  for (Index k = 0; k < inst.m_u; ++k)
    CHECK_FALSE(enumerate_vertices(build_dual_polyhedron(inst, k), k).empty);
  CHECK(solve_lp(build_hpr(inst)).status == LpStatus::Optimal);
}

TEST_CASE("screening records the rejection stage") {
  const ScreenedBatch batch = generate_screened({2, 2, 2, 2}, 1, 30);
  bool saw_dual = false, saw_hpr = false;
  for (const auto& record : batch.records) {
    if (!record.kept) {
      if (record.rejection_stage.rfind("dual_adversarial", 0) == 0) saw_dual = true;
      if (record.rejection_stage == "hpr") saw_hpr = true;
    }
  }
  // The dual stage dominates rejections at this size; hpr rejections are
  // possible but rare, so only the dual stage is asserted.
  CHECK(saw_dual);
  (void)saw_hpr;
}
