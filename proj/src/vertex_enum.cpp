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

#include "norbip/vertex_enum.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <ostream>

namespace norbip {

namespace {

// One generator of the homogenized cone in R^(dim+1), kept as a primitive
// integer direction, with the set of tight constraints as a bitmask.
struct Generator {
  RationalVector coords;               // size dim+1; last coordinate is t
  std::vector<std::uint64_t> tight;    // over orthant slots then row slots
};

void set_bit(std::vector<std::uint64_t>& bits, std::size_t i) {
  bits[i / 64] |= std::uint64_t{1} << (i % 64);
}

bool subset_of(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  for (std::size_t w = 0; w < a.size(); ++w) {
    if ((a[w] & ~b[w]) != 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> intersect(const std::vector<std::uint64_t>& a,
                                     const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out(a.size());
  for (std::size_t w = 0; w < a.size(); ++w) out[w] = a[w] & b[w];
  return out;
}

// Scale to a primitive integer vector (multiply by the lcm of denominators,
// divide by the gcd of numerators). All generators here are componentwise
// nonnegative, so no sign normalization is needed.
void make_primitive(RationalVector& v) {
  mpz_class den_lcm = 1;
  for (Index i = 0; i < v.size(); ++i)
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), v(i).denominator().get_mpz_t());
  mpz_class num_gcd = 0;
  std::vector<mpz_class> scaled(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) {
    scaled[i] = v(i).numerator() * (den_lcm / v(i).denominator());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled[i].get_mpz_t());
  }
  if (num_gcd == 0) return;  // zero vector
  for (Index i = 0; i < v.size(); ++i) v(i) = Rational(scaled[i] / num_gcd, mpz_class(1));
}

// Value of constraint slot s at point p. Slots 0..dim are the orthant rows
// (z_i >= 0 and t >= 0); slot dim+1+r is row r homogenized to
// a_r . z - rhs_r * t >= 0.
Rational slot_value(const InequalitySystem& sys, Index slot, const RationalVector& p) {
  const Index dim = sys.dim;
  if (slot <= dim) return p(slot);
  const auto& [coeffs, rhs] = sys.rows[static_cast<std::size_t>(slot - dim - 1)];
  Rational value = -rhs * p(dim);
  for (Index j = 0; j < dim; ++j) value += coeffs(j) * p(j);
  return value;
}

std::vector<std::uint64_t> tight_set(const InequalitySystem& sys, Index processed_rows,
                                     const RationalVector& p, std::size_t words) {
  std::vector<std::uint64_t> bits(words, 0);
  const Index slots = sys.dim + 1 + processed_rows;
  for (Index s = 0; s < slots; ++s) {
    if (slot_value(sys, s, p).is_zero()) set_bit(bits, static_cast<std::size_t>(s));
  }
  return bits;
}

}  // namespace

InequalitySystem build_dual_polyhedron(const BilevelInstance& inst, Index k) {
  assert(k >= 0 && k < inst.m_u);
  InequalitySystem sys;
  sys.dim = inst.m_l + 1;
  sys.rows.reserve(static_cast<std::size_t>(inst.n_l));
  for (Index j = 0; j < inst.n_l; ++j) {
    RationalVector row = RationalVector::Zero(sys.dim);
    for (Index i = 0; i < inst.m_l; ++i) row(i) = inst.B(i, j);
    row(inst.m_l) = inst.d(j);
    sys.rows.emplace_back(std::move(row), inst.H(k, j));
  }
  return sys;
}

GeneratorSet enumerate_generators(const InequalitySystem& system) {
  const Index dim = system.dim;
  const Index num_rows = static_cast<Index>(system.rows.size());
  const std::size_t total_slots = static_cast<std::size_t>(dim + 1 + num_rows);
  const std::size_t words = (total_slots + 63) / 64;

  // Start from the nonnegative orthant of the homogenized space.
  std::vector<Generator> gens;
  gens.reserve(static_cast<std::size_t>(dim + 1));
  for (Index i = 0; i <= dim; ++i) {
    Generator g;
    g.coords = RationalVector::Zero(dim + 1);
    g.coords(i) = Rational(1);
    g.tight = tight_set(system, 0, g.coords, words);
    gens.push_back(std::move(g));
  }

  for (Index r = 0; r < num_rows; ++r) {
    const Index slot = dim + 1 + r;
    std::vector<Rational> value(gens.size());
    bool any_negative = false;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      value[i] = slot_value(system, slot, gens[i].coords);
      if (value[i] < Rational(0)) any_negative = true;
    }
    if (!any_negative) {
      for (std::size_t i = 0; i < gens.size(); ++i) {
        if (value[i].is_zero()) set_bit(gens[i].tight, static_cast<std::size_t>(slot));
      }
      continue;
    }

    std::vector<Generator> next;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (value[i] < Rational(0)) continue;
      Generator g = gens[i];
      if (value[i].is_zero()) set_bit(g.tight, static_cast<std::size_t>(slot));
      next.push_back(std::move(g));
    }
    // Combine adjacent (positive, negative) pairs into new tight generators.
    for (std::size_t p = 0; p < gens.size(); ++p) {
      if (!(value[p] > Rational(0))) continue;
      for (std::size_t q = 0; q < gens.size(); ++q) {
        if (!(value[q] < Rational(0))) continue;
        const auto common = intersect(gens[p].tight, gens[q].tight);
        bool adjacent = true;
        for (std::size_t o = 0; o < gens.size(); ++o) {
          if (o == p || o == q) continue;
          if (subset_of(common, gens[o].tight)) { adjacent = false; break; }
        }
        if (!adjacent) continue;
        Generator g;
        g.coords = value[p] * gens[q].coords - value[q] * gens[p].coords;
        make_primitive(g.coords);
        g.tight = tight_set(system, r + 1, g.coords, words);
        next.push_back(std::move(g));
      }
    }
    gens = std::move(next);
  }

  GeneratorSet out;
  for (const Generator& g : gens) {
    if (g.coords(dim).is_zero()) {
      out.rays.push_back(g.coords.head(dim));
    } else {
      RationalVector vertex(dim);
      for (Index j = 0; j < dim; ++j) vertex(j) = g.coords(j) / g.coords(dim);
      out.vertices.push_back(std::move(vertex));
    }
  }
  std::sort(out.vertices.begin(), out.vertices.end(), lex_less);
  out.vertices.erase(std::unique(out.vertices.begin(), out.vertices.end(), vec_eq),
                     out.vertices.end());
  std::sort(out.rays.begin(), out.rays.end(), lex_less);
  out.rays.erase(std::unique(out.rays.begin(), out.rays.end(), vec_eq), out.rays.end());
  return out;
}

DualPolyhedron enumerate_vertices(const InequalitySystem& system, Index k) {
  GeneratorSet gen = enumerate_generators(system);
  DualPolyhedron poly;
  poly.k = k;
  poly.vertices = std::move(gen.vertices);
  poly.ray_count = static_cast<Index>(gen.rays.size());
  poly.empty = poly.vertices.empty();
  return poly;
}

void write_vertices_csv(std::ostream& os, const std::vector<DualPolyhedron>& polys) {
  Index m_l = 0;
  for (const auto& p : polys) {
    if (!p.vertices.empty()) m_l = p.vertices.front().size() - 1;
  }
  os << "k,vertex_index";
  for (Index i = 1; i <= m_l; ++i) os << ",alpha_" << i;
  os << ",beta\n";
  for (const auto& p : polys) {
    for (std::size_t l = 0; l < p.vertices.size(); ++l) {
      os << (p.k + 1) << "," << (l + 1);
      const RationalVector& v = p.vertices[l];
      for (Index j = 0; j < v.size(); ++j) os << "," << v(j).str();
      os << "\n";
    }
  }
}

}  // namespace norbip
