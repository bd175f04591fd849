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

#ifndef NORBIP_GENERATOR_HPP_
#define NORBIP_GENERATOR_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "norbip/instance.hpp"

namespace norbip {

struct Dims {
  Index n_u = 0, n_l = 0, m_u = 0, m_l = 0;
};

/// Random instance: every coefficient of G, H, q, A, B, b, c_x, c_y, d (in
/// that order, matrices row-major) is 0 with probability 3/5 and otherwise
/// uniform on [0, 1] snapped to a denominator-10^6 rational. Deterministic
/// per (dims, seed): draws come from mt19937_64 through a rejection
/// sampler, so results do not depend on the standard library.
BilevelInstance generate(const Dims& dims, std::uint64_t seed);

struct ScreeningRecord {
  std::uint64_t seed = 0;
  bool kept = false;
  std::string rejection_stage;  // "dual_adversarial(k)" or "hpr" when rejected
};

struct ScreenedBatch {
  std::vector<BilevelInstance> instances;
  std::vector<ScreeningRecord> records;
  std::int64_t trials = 0;
};

/// Draws seeds base_seed, base_seed+1, ... and keeps instances that pass
/// the first two pipeline stages (all dual adversarial polyhedra nonempty,
/// high-point relaxation feasible) until `count` are collected.
ScreenedBatch generate_screened(const Dims& dims, std::uint64_t base_seed, int count);

/// Manifest CSV: seed, dims, kept/rejected, rejection stage.
void write_manifest_csv(std::ostream& os, const Dims& dims, const ScreenedBatch& batch);

}  // namespace norbip

#endif  // NORBIP_GENERATOR_HPP_
