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

#include <filesystem>

#include "catch2/catch_amalgamated.hpp"
#include "norbip/generator.hpp"
#include "norbip/instance_io.hpp"
#include "test_helpers.hpp"

using namespace norbip;
using norbip::testing::bounded_example;

namespace {

bool instances_equal(const BilevelInstance& a, const BilevelInstance& b) {
  auto mat_eq = [](const RationalMatrix& x, const RationalMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
    for (Index i = 0; i < x.rows(); ++i)
      for (Index j = 0; j < x.cols(); ++j)
        if (x(i, j) != y(i, j)) return false;
    return true;
  };
  return a.name == b.name && a.n_u == b.n_u && a.n_l == b.n_l && a.m_u == b.m_u &&
         a.m_l == b.m_l && vec_eq(a.c_x, b.c_x) && vec_eq(a.c_y, b.c_y) &&
         mat_eq(a.G, b.G) && mat_eq(a.H, b.H) && vec_eq(a.q, b.q) && mat_eq(a.A, b.A) &&
         mat_eq(a.B, b.B) && vec_eq(a.b, b.b) && vec_eq(a.d, b.d);
}

}  // namespace

TEST_CASE("validate accepts the bounded example") {
  CHECK(validate(bounded_example()).empty());
}

TEST_CASE("validate reports every dimension mismatch") {
  BilevelInstance inst = bounded_example();
  inst.b = RationalVector::Zero(3);  // m_l is 2
  const auto issues = validate(inst);
  REQUIRE(issues.size() == 1);
  CHECK(issues.front().find("b") != std::string::npos);

  inst.G = RationalMatrix::Zero(1, 1);
  CHECK(validate(inst).size() == 2);
}

TEST_CASE("loader reports malformed rationals one entry per offending cell") {
  const std::string text = R"({
    "name": "broken", "n_u": 1, "n_l": 1, "m_u": 1, "m_l": 1,
    "c_x": ["1/0"], "c_y": ["2/0"],
    "G": [["1"]], "H": [["bogus"]], "q": ["1"],
    "A": [["1"]], "B": [["1"]], "b": ["1"], "d": ["1"]
  })";
  try {
    instance_from_json_text(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    REQUIRE(e.issues().size() == 3);
    CHECK(e.issues()[0].find("c_x[0]") != std::string::npos);
    CHECK(e.issues()[1].find("c_y[0]") != std::string::npos);
    CHECK(e.issues()[2].find("H[0][0]") != std::string::npos);
  }
}

TEST_CASE("loader rejects floating-point literals") {
  const std::string text = R"({
    "name": "f", "n_u": 1, "n_l": 1, "m_u": 1, "m_l": 1,
    "c_x": [0.25], "c_y": ["0"],
    "G": [["0"]], "H": [["0"]], "q": ["0"],
    "A": [["0"]], "B": [["0"]], "b": ["0"], "d": ["0"]
  })";
  CHECK_THROWS_AS(instance_from_json_text(text), ParseError);
}

TEST_CASE("loader accepts decimals-as-strings and integers") {
  const std::string text = R"({
    "name": "ok", "n_u": 1, "n_l": 1, "m_u": 1, "m_l": 1,
    "c_x": ["0.25"], "c_y": [3],
    "G": [["-1/2"]], "H": [["0"]], "q": ["1"],
    "A": [["1"]], "B": [["1"]], "b": ["1"], "d": ["1"]
  })";
  const BilevelInstance inst = instance_from_json_text(text);
  CHECK(inst.c_x(0) == Rational(1, 4));
  CHECK(inst.c_y(0) == Rational(3));
  CHECK(inst.G(0, 0) == Rational(-1, 2));
}

TEST_CASE("round-trip persistence is bit-exact") {
  const BilevelInstance inst = bounded_example();
  const std::string path = (std::filesystem::temp_directory_path() / "norbip_rt.json").string();
  save_instance(inst, path);
  const BilevelInstance back = load_instance(path);
  CHECK(instances_equal(inst, back));
  std::filesystem::remove(path);
}

TEST_CASE("round-trip persistence holds on generated instances") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const BilevelInstance inst = generate({3, 2, 2, 3}, seed);
    const BilevelInstance back = instance_from_json_text(instance_to_json_text(inst));
    CHECK(instances_equal(inst, back));
  }
}

TEST_CASE("objective-robust transform builds the epigraph row") {
  const BilevelInstance inst = bounded_example();

  SECTION("conservative keeps the original upper rows") {
    const BilevelInstance out = to_objective_robust(inst, true);
    CHECK(out.n_u == 2);
    CHECK(out.m_u == 3);
    // tau row: (c_x, -1) on x, c_y on z, rhs 0.
    CHECK(out.G(2, 0) == Rational(1));
    CHECK(out.G(2, 1) == Rational(-1));
    CHECK(out.H(2, 0) == Rational(-10));
    CHECK(out.q(2) == Rational(0));
    // Original rows retained.
    CHECK(out.G(0, 0) == Rational(-1));
    CHECK(out.H(1, 0) == Rational(2));
    // Objective: min tau.
    CHECK(out.c_x(0) == Rational(0));
    CHECK(out.c_x(1) == Rational(1));
    CHECK(out.c_y(0) == Rational(0));
  }

  SECTION("non-conservative robustifies only the tau row") {
    const BilevelInstance out = to_objective_robust(inst, false);
    CHECK(out.m_u == 1);
    CHECK(out.G(0, 0) == Rational(1));
    CHECK(out.G(0, 1) == Rational(-1));
    CHECK(out.H(0, 0) == Rational(-10));
  }

  SECTION("lower-level data is preserved exactly") {
    const BilevelInstance out = to_objective_robust(inst, true);
    CHECK(vec_eq(out.b, inst.b));
    CHECK(vec_eq(out.d, inst.d));
    for (Index i = 0; i < inst.m_l; ++i) {
      for (Index j = 0; j < inst.n_u; ++j) CHECK(out.A(i, j) == inst.A(i, j));
      CHECK(out.A(i, inst.n_u) == Rational(0));  // tau column
      CHECK(out.B(i, 0) == inst.B(i, 0));
    }
  }
}

TEST_CASE("promote_constraints moves rows between levels") {
  BilevelInstance inst = generate({2, 2, 1, 5}, 3);

  SECTION("moving two rows updates the counts") {
    const BilevelInstance out = promote_constraints(inst, {0, 3});
    CHECK(out.m_u == 3);
    CHECK(out.m_l == 3);
    // Moved rows land at the end of the upper level in order.
    CHECK(vec_eq(out.G.row(1).transpose(), inst.A.row(0).transpose()));
    CHECK(vec_eq(out.G.row(2).transpose(), inst.A.row(3).transpose()));
    CHECK(out.q(1) == inst.b(0));
    CHECK(out.q(2) == inst.b(3));
    // Remaining lower rows keep their relative order.
    CHECK(vec_eq(out.B.row(0).transpose(), inst.B.row(1).transpose()));
    CHECK(vec_eq(out.B.row(2).transpose(), inst.B.row(4).transpose()));
  }

  SECTION("empty selection is the identity") {
    const BilevelInstance out = promote_constraints(inst, {});
    CHECK(instances_equal(out, inst));
  }

  SECTION("promoting all rows empties the lower level") {
    const BilevelInstance out = promote_constraints(inst, {0, 1, 2, 3, 4});
    CHECK(out.m_l == 0);
    CHECK(out.m_u == 6);
    CHECK(out.A.rows() == 0);
    CHECK(validate(out).empty());
  }

  SECTION("out-of-range indices throw") {
    CHECK_THROWS_AS(promote_constraints(inst, {5}), std::out_of_range);
    CHECK_THROWS_AS(promote_constraints(inst, {-1}), std::out_of_range);
  }

  SECTION("moving the first six of twenty lower rows") {
    const BilevelInstance big = generate({5, 5, 1, 20}, 11);
    const BilevelInstance out = promote_constraints(big, {0, 1, 2, 3, 4, 5});
    CHECK(out.m_u == big.m_u + 6);
    CHECK(out.m_l == 14);
    CHECK(validate(out).empty());
  }

  SECTION("row multiset is invariant under promotion") {
    const BilevelInstance out = promote_constraints(inst, {1, 2});
    CHECK(out.m_u + out.m_l == inst.m_u + inst.m_l);
    const BilevelInstance back = promote_constraints(out, {});
    CHECK(instances_equal(back, out));
  }
}

TEST_CASE("negative delta forces the optimistic mode") {
  RobustnessConfig config{Rational(-1, 2), RobustMode::ConstraintRobust};
  CHECK(normalized(config).mode == RobustMode::Optimistic);
  config.delta = Rational(0);
  CHECK(normalized(config).mode == RobustMode::ConstraintRobust);
}
