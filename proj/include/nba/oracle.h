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

#ifndef NBA_ORACLE_H_
#define NBA_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "nba/load_state.h"
#include "nba/potentials.h"
#include "nba/process.h"

namespace nba {

inline constexpr std::size_t kDefaultOracleBound = 256;

// Allocation probabilities by load rank (rank 0 = most loaded bin), with the
// rank <-> bin permutation they were computed under.
struct AllocationVector {
  std::vector<double> q;
  std::vector<std::size_t> rank_to_bin;
  std::vector<std::size_t> bin_to_rank;

  double Sum() const;
  // Probability for a bin index rather than a rank.
  double ForBin(std::size_t bin) const { return q[bin_to_rank[bin]]; }
};

// q_i = (2i - 1)/n^2 for 1-based rank i, identity permutation.
AllocationVector two_choice_vector(std::size_t n);

// Exact vector from all n^2 ordered pairs, each weighted 1/n^2 and split by
// first_choice_probability. Throws SizeError if n > bound.
AllocationVector allocation_vector(const ProcessSpec& spec,
                                   const LoadState& state,
                                   std::size_t bound = kDefaultOracleBound);
AllocationVector allocation_vector(const ProcessSpec& spec,
                                   const LoadState& state,
                                   const ProcessAux& aux,
                                   std::size_t bound = kDefaultOracleBound);

// Mass that an unordered pair of ranks (heavy < light, i.e. heavy is the
// more loaded) sends to the heavier rank. The two-choice vector sends none,
// so q = p + sum over flows of mass * (e_heavy - e_light).
struct PairFlow {
  std::size_t heavy = 0;
  std::size_t light = 0;
  double mass = 0.0;
};
std::vector<PairFlow> pair_flows(const ProcessSpec& spec,
                                 const LoadState& state,
                                 std::size_t bound = kDefaultOracleBound);

// Ordered rank pairs (i, j) with 0 < y_i - y_j <= g. Ranks are 0-based.
using PairSet = std::set<std::pair<std::size_t, std::size_t>>;
PairSet manipulable_pairs(const NormalizedView& view, std::uint64_t g);
PairSet manipulable_pairs(const LoadState& state, std::uint64_t g);

// Exact E[Phi(y') - Phi(y)] over the n placements. Quadratic and absolute
// value are computed in integer arithmetic on n*y; exponential potentials use
// expm1-based term differences.
double expected_change(const PotentialSpec& potential,
                       const AllocationVector& q, const NormalizedView& view);

// Every rank with y >= z - 1 has q <= e^{-phi}/n.
bool k_event_holds(const AllocationVector& q, const NormalizedView& view,
                   double phi, double z);

struct GammaBoundCheck {
  double exact = 0.0;
  double bound = 0.0;
  bool holds() const { return exact <= bound; }
};

// Exact E[Delta Gamma] and the bound h(y) + sum_i q_i f(y_i).
GammaBoundCheck check_gamma_bound(const AllocationVector& q,
                                  const NormalizedView& view, double gamma);

// Prefix sums of a dominate those of b (within tol), with equal totals.
bool majorizes(std::span<const double> a, std::span<const double> b,
               double tol = 1e-12);

}  // namespace nba

#endif  // NBA_ORACLE_H_
