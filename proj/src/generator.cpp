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

#include "norbip/generator.hpp"

#include <ostream>
#include <random>
#include <stdexcept>

#include "norbip/lp.hpp"
#include "norbip/reformulations.hpp"
#include "norbip/vertex_enum.hpp"

namespace norbip {

namespace {

// Unbiased uniform draw on [0, bound) by rejection on raw engine words;
// bit-exact across platforms since mt19937_64 itself is standardized.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    while (true) {
      const std::uint64_t word = engine_();
      if (word < limit) return word % bound;
    }
  }

  Rational coefficient() {
    if (below(5) < 3) return Rational(0);
    return Rational(static_cast<std::int64_t>(below(1'000'001)), 1'000'000);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

BilevelInstance generate(const Dims& dims, std::uint64_t seed) {
  if (dims.n_u <= 0 || dims.n_l <= 0 || dims.m_u <= 0 || dims.m_l <= 0)
    throw std::invalid_argument("generate: dimensions must be positive");

  Sampler sampler(seed);
  auto fill_matrix = [&](Index rows, Index cols) {
    RationalMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = sampler.coefficient();
    return m;
  };
  auto fill_vector = [&](Index size) {
    RationalVector v(size);
    for (Index i = 0; i < size; ++i) v(i) = sampler.coefficient();
    return v;
  };

  BilevelInstance inst;
  inst.name = "rand_" + std::to_string(dims.n_u) + "x" + std::to_string(dims.n_l) + "x" +
              std::to_string(dims.m_u) + "x" + std::to_string(dims.m_l) + "_s" +
              std::to_string(seed);
  inst.n_u = dims.n_u;
  inst.n_l = dims.n_l;
  inst.m_u = dims.m_u;
  inst.m_l = dims.m_l;
  inst.G = fill_matrix(dims.m_u, dims.n_u);
  inst.H = fill_matrix(dims.m_u, dims.n_l);
  inst.q = fill_vector(dims.m_u);
  inst.A = fill_matrix(dims.m_l, dims.n_u);
  inst.B = fill_matrix(dims.m_l, dims.n_l);
  inst.b = fill_vector(dims.m_l);
  inst.c_x = fill_vector(dims.n_u);
  inst.c_y = fill_vector(dims.n_l);
  inst.d = fill_vector(dims.n_l);
  return inst;
}

ScreenedBatch generate_screened(const Dims& dims, std::uint64_t base_seed, int count) {
  if (count < 1) throw std::invalid_argument("generate_screened: count must be >= 1");
  ScreenedBatch batch;
  std::uint64_t seed = base_seed;
  while (static_cast<int>(batch.instances.size()) < count) {
    BilevelInstance inst = generate(dims, seed);
    ++batch.trials;
    ScreeningRecord record;
    record.seed = seed;
    ++seed;

    std::string rejection;
    for (Index k = 0; k < inst.m_u && rejection.empty(); ++k) {
      if (enumerate_vertices(build_dual_polyhedron(inst, k), k).empty)
        rejection = "dual_adversarial(" + std::to_string(k + 1) + ")";
    }
    if (rejection.empty() && solve_lp(build_hpr(inst)).status == LpStatus::Infeasible)
      rejection = "hpr";

    record.kept = rejection.empty();
    record.rejection_stage = rejection;
    batch.records.push_back(record);
    if (record.kept) batch.instances.push_back(std::move(inst));
  }
  return batch;
}

void write_manifest_csv(std::ostream& os, const Dims& dims, const ScreenedBatch& batch) {
  os << "seed,n_u,n_l,m_u,m_l,kept,rejection_stage\n";
  for (const ScreeningRecord& r : batch.records) {
    os << r.seed << "," << dims.n_u << "," << dims.n_l << "," << dims.m_u << "," << dims.m_l
       << "," << (r.kept ? "kept" : "rejected") << "," << r.rejection_stage << "\n";
  }
}

}  // namespace norbip
