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

#include "norbip/instance.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace norbip {

namespace {

void check_shape(std::vector<std::string>& out, const std::string& what, Index rows,
                 Index cols, Index want_rows, Index want_cols) {
  if (rows != want_rows || cols != want_cols) {
    out.push_back(what + " has shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                  ", expected " + std::to_string(want_rows) + "x" + std::to_string(want_cols));
  }
}

void check_length(std::vector<std::string>& out, const std::string& what, Index size,
                  Index want) {
  if (size != want) {
    out.push_back(what + " has length " + std::to_string(size) + ", expected " +
                  std::to_string(want));
  }
}

}  // namespace

std::vector<std::string> validate(const BilevelInstance& inst) {
  std::vector<std::string> out;
  if (inst.n_u < 0) out.push_back("n_u is negative");
  if (inst.n_l < 0) out.push_back("n_l is negative");
  if (inst.m_u < 0) out.push_back("m_u is negative");
  if (inst.m_l < 0) out.push_back("m_l is negative");
  if (!out.empty()) return out;
  check_length(out, "c_x", inst.c_x.size(), inst.n_u);
  check_length(out, "c_y", inst.c_y.size(), inst.n_l);
  check_shape(out, "G", inst.G.rows(), inst.G.cols(), inst.m_u, inst.n_u);
  check_shape(out, "H", inst.H.rows(), inst.H.cols(), inst.m_u, inst.n_l);
  check_length(out, "q", inst.q.size(), inst.m_u);
  check_shape(out, "A", inst.A.rows(), inst.A.cols(), inst.m_l, inst.n_u);
  check_shape(out, "B", inst.B.rows(), inst.B.cols(), inst.m_l, inst.n_l);
  check_length(out, "b", inst.b.size(), inst.m_l);
  check_length(out, "d", inst.d.size(), inst.n_l);
  return out;
}

BilevelInstance to_objective_robust(const BilevelInstance& inst, bool conservative) {
  BilevelInstance out;
  out.name = inst.name + (conservative ? "_conservative" : "_objective_robust");
  out.n_u = inst.n_u + 1;
  out.n_l = inst.n_l;
  out.m_u = conservative ? inst.m_u + 1 : 1;
  out.m_l = inst.m_l;

  out.c_x = RationalVector::Zero(out.n_u);
  out.c_x(inst.n_u) = Rational(1);  // min tau
  out.c_y = RationalVector::Zero(inst.n_l);

  out.G = RationalMatrix::Zero(out.m_u, out.n_u);
  out.H = RationalMatrix::Zero(out.m_u, inst.n_l);
  out.q = RationalVector::Zero(out.m_u);
  if (conservative) {
    out.G.block(0, 0, inst.m_u, inst.n_u) = inst.G;
    out.H.topRows(inst.m_u) = inst.H;
    out.q.head(inst.m_u) = inst.q;
  }
  const Index tau_row = out.m_u - 1;
  out.G.row(tau_row).head(inst.n_u) = inst.c_x.transpose();
  out.G(tau_row, inst.n_u) = Rational(-1);
  out.H.row(tau_row) = inst.c_y.transpose();
  out.q(tau_row) = Rational(0);

  out.A = RationalMatrix::Zero(inst.m_l, out.n_u);
  out.A.leftCols(inst.n_u) = inst.A;
  out.B = inst.B;
  out.b = inst.b;
  out.d = inst.d;
  return out;
}

BilevelInstance promote_constraints(const BilevelInstance& inst,
                                    const std::vector<Index>& rows) {
  std::set<Index> selected;
  for (Index r : rows) {
    if (r < 0 || r >= inst.m_l)
      throw std::out_of_range("promote_constraints: row index " + std::to_string(r) +
                              " outside [0, " + std::to_string(inst.m_l) + ")");
    selected.insert(r);
  }
  const Index moved = static_cast<Index>(selected.size());

  BilevelInstance out;
  out.name = inst.name;
  out.n_u = inst.n_u;
  out.n_l = inst.n_l;
  out.m_u = inst.m_u + moved;
  out.m_l = inst.m_l - moved;
  out.c_x = inst.c_x;
  out.c_y = inst.c_y;
  out.d = inst.d;

  out.G = RationalMatrix::Zero(out.m_u, inst.n_u);
  out.H = RationalMatrix::Zero(out.m_u, inst.n_l);
  out.q = RationalVector::Zero(out.m_u);
  out.A = RationalMatrix::Zero(out.m_l, inst.n_u);
  out.B = RationalMatrix::Zero(out.m_l, inst.n_l);
  out.b = RationalVector::Zero(out.m_l);

  out.G.topRows(inst.m_u) = inst.G;
  out.H.topRows(inst.m_u) = inst.H;
  out.q.head(inst.m_u) = inst.q;

  Index up = inst.m_u, low = 0;
  for (Index i = 0; i < inst.m_l; ++i) {
    if (selected.count(i)) {
      out.G.row(up) = inst.A.row(i);
      out.H.row(up) = inst.B.row(i);
      out.q(up) = inst.b(i);
      ++up;
    } else {
      out.A.row(low) = inst.A.row(i);
      out.B.row(low) = inst.B.row(i);
      out.b(low) = inst.b(i);
      ++low;
    }
  }
  return out;
}

RobustnessConfig normalized(RobustnessConfig config) {
  if (config.delta < Rational(0)) config.mode = RobustMode::Optimistic;
  return config;
}

}  // namespace norbip
