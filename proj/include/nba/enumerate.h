// Copyright 2026 The nba Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NBA_ENUMERATE_H_
#define NBA_ENUMERATE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "nba/potentials.h"
#include "nba/process.h"

namespace nba {

// Gap distribution keyed by n * gap, which is always an integer.
using ScaledGapPmf = std::map<std::int64_t, double>;

struct ExactDistribution {
  std::size_t n = 0;
  std::uint64_t m = 0;
  ScaledGapPmf gap_pmf;
  // expected_potentials[t][k] = E[potentials[k] after t balls], t = 0..m.
  std::vector<std::vector<double>> expected_potentials;
  // Largest number of distinct (loads, aux) states held at once.
  std::size_t peak_states = 0;
};

// Exact outcome-tree expansion from n empty bins, merging identical
// (loads, aux) states after every step. Work is bounded by `work_guard`
// state-pair expansions in total; beyond it a SizeError suggests Monte Carlo.
ExactDistribution enumerate_exact(
    const ProcessSpec& spec, std::size_t n, std::uint64_t m,
    const std::vector<PotentialSpec>& potentials = {},
    std::uint64_t work_guard = 10'000'000);

// Empirical gap distribution of `runs` independent simulations, run r using
// Substream(seed, r).
ScaledGapPmf monte_carlo_gap_pmf(const ProcessSpec& spec, std::size_t n,
                                 std::uint64_t m, std::uint64_t runs,
                                 std::uint64_t seed);

double total_variation(const ScaledGapPmf& a, const ScaledGapPmf& b);

// P(gap <= v) of a dominates that of b for every v (a is stochastically
// smaller or equal), within tol.
bool cdf_dominates(const ScaledGapPmf& a, const ScaledGapPmf& b,
                   double tol = 1e-12);

}  // namespace nba

#endif  // NBA_ENUMERATE_H_
