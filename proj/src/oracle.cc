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

#include "nba/oracle.h"

#include <cmath>
#include <numeric>
#include <string>

#include "nba/errors.h"

namespace nba {
namespace {

void CheckBound(std::size_t n, std::size_t bound) {
  if (n > bound) {
    throw SizeError("oracle: n=" + std::to_string(n) +
                    " exceeds the oracle bound " + std::to_string(bound));
  }
}

void CheckSameState(const AllocationVector& q, const NormalizedView& view) {
  if (q.q.size() != view.n) {
    throw ContractViolation("allocation vector and view differ in n");
  }
}

}  // namespace

double AllocationVector::Sum() const {
  long double s = 0;
  for (double v : q) s += v;
  return static_cast<double>(s);
}

AllocationVector two_choice_vector(std::size_t n) {
  if (n == 0) throw ContractViolation("two_choice_vector: n must be >= 1");
  AllocationVector v;
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  for (std::size_t i = 1; i <= n; ++i) {
    v.q.push_back(static_cast<double>(2 * i - 1) / n2);
  }
  v.rank_to_bin.resize(n);
  std::iota(v.rank_to_bin.begin(), v.rank_to_bin.end(), std::size_t{0});
  v.bin_to_rank = v.rank_to_bin;
  return v;
}

AllocationVector allocation_vector(const ProcessSpec& spec,
                                   const LoadState& state, std::size_t bound) {
  return allocation_vector(spec, state, make_aux(spec, state), bound);
}

AllocationVector allocation_vector(const ProcessSpec& spec,
                                   const LoadState& state,
                                   const ProcessAux& aux, std::size_t bound) {
  const std::size_t n = state.n();
  CheckBound(n, bound);
  const NormalizedView view = normalized(state);
  std::vector<long double> by_bin(n, 0.0L);
  const long double w = 1.0L / (static_cast<long double>(n) * n);
  if (std::holds_alternative<OneChoice>(spec)) {
    for (auto& v : by_bin) v = 1.0L / n;
  } else {
    for (std::size_t i1 = 0; i1 < n; ++i1) {
      for (std::size_t i2 = 0; i2 < n; ++i2) {
        if (i1 == i2) {
          by_bin[i1] += w;
          continue;
        }
        const long double p = first_choice_probability(spec, state, aux, i1, i2);
        by_bin[i1] += w * p;
        by_bin[i2] += w * (1.0L - p);
      }
    }
  }
  AllocationVector out;
  out.rank_to_bin = view.rank_to_bin;
  out.bin_to_rank = view.bin_to_rank;
  out.q.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    out.q[r] = static_cast<double>(by_bin[view.rank_to_bin[r]]);
  }
  return out;
}

std::vector<PairFlow> pair_flows(const ProcessSpec& spec,
                                 const LoadState& state, std::size_t bound) {
  const std::size_t n = state.n();
  CheckBound(n, bound);
  const NormalizedView view = normalized(state);
  const ProcessAux aux = make_aux(spec, state);
  const double w = 1.0 / (static_cast<double>(n) * n);
  std::vector<PairFlow> flows;
  for (std::size_t hr = 0; hr < n; ++hr) {
    for (std::size_t lr = hr + 1; lr < n; ++lr) {
      const std::size_t hb = view.rank_to_bin[hr];
      const std::size_t lb = view.rank_to_bin[lr];
      double to_heavy;
      if (std::holds_alternative<OneChoice>(spec)) {
        to_heavy = w;
      } else {
        to_heavy = w * first_choice_probability(spec, state, aux, hb, lb) +
                   w * (1.0 - first_choice_probability(spec, state, aux, lb, hb));
      }
      if (to_heavy != 0.0) flows.push_back({hr, lr, to_heavy});
    }
  }
  return flows;
}

PairSet manipulable_pairs(const NormalizedView& view, std::uint64_t g) {
  PairSet out;
  const auto limit = static_cast<std::int64_t>(g) *
                     static_cast<std::int64_t>(view.n);
  for (std::size_t i = 0; i < view.n; ++i) {
    for (std::size_t j = 0; j < view.n; ++j) {
      const std::int64_t d = view.scaled[i] - view.scaled[j];
      if (d > 0 && d <= limit) out.emplace(i, j);
    }
  }
  return out;
}

PairSet manipulable_pairs(const LoadState& state, std::uint64_t g) {
  return manipulable_pairs(normalized(state), g);
}

double expected_change(const PotentialSpec& potential,
                       const AllocationVector& q, const NormalizedView& view) {
  CheckSameState(q, view);
  const std::size_t n = view.n;
  const auto ni = static_cast<__int128>(n);
  const double nd = static_cast<double>(n);
  const auto& u = view.scaled;

  if (std::holds_alternative<QuadraticPotential>(potential)) {
    // n^2 * Upsilon = sum u^2; every quantity below is an exact integer.
    __int128 common = 0;
    for (std::int64_t v : u) {
      const __int128 a = v;
      common += (a - 1) * (a - 1) - a * a;
    }
    long double acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const __int128 a = u[i];
      const __int128 per = (a + ni - 1) * (a + ni - 1) - (a - 1) * (a - 1);
      acc += static_cast<long double>(q.q[i]) *
             static_cast<long double>(common + per);
    }
    return static_cast<double>(acc / (static_cast<long double>(nd) * nd));
  }
  if (std::holds_alternative<AbsoluteValuePotential>(potential)) {
    auto abs128 = [](__int128 a) { return a < 0 ? -a : a; };
    __int128 common = 0;
    for (std::int64_t v : u) common += abs128(__int128{v} - 1) - abs128(v);
    long double acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const __int128 a = u[i];
      const __int128 per = abs128(a + ni - 1) - abs128(a - 1);
      acc += static_cast<long double>(q.q[i]) *
             static_cast<long double>(common + per);
    }
    return static_cast<double>(acc / static_cast<long double>(nd));
  }
  long double common = 0;
  for (std::int64_t v : u) {
    common += term_difference(potential, static_cast<double>(v - 1) / nd,
                              static_cast<double>(v) / nd);
  }
  long double acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double after = static_cast<double>(u[i] + static_cast<std::int64_t>(n) - 1) / nd;
    const double before = static_cast<double>(u[i] - 1) / nd;
    acc += static_cast<long double>(q.q[i]) *
           (common + term_difference(potential, after, before));
  }
  return static_cast<double>(acc);
}

bool k_event_holds(const AllocationVector& q, const NormalizedView& view,
                   double phi, double z) {
  CheckSameState(q, view);
  const double limit = std::exp(-phi) / static_cast<double>(view.n);
  for (std::size_t r = 0; r < view.n; ++r) {
    // y >= z - 1  <=>  n*y >= n*(z - 1), compared without rounding y.
    const double lhs = static_cast<double>(view.scaled[r]);
    if (lhs >= static_cast<double>(view.n) * (z - 1.0) && q.q[r] > limit) {
      return false;
    }
  }
  return true;
}

GammaBoundCheck check_gamma_bound(const AllocationVector& q,
                                  const NormalizedView& view, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ParameterError("check_gamma_bound: gamma must be in (0,1)");
  }
  CheckSameState(q, view);
  GammaBoundCheck out;
  out.exact = expected_change(GammaPotential{gamma}, q, view);
  const double nd = static_cast<double>(view.n);
  const double g1 = gamma / nd;
  const double g2 = gamma * gamma / (nd * nd);
  long double h = 0;
  long double f = 0;
  for (std::size_t r = 0; r < view.n; ++r) {
    const double up = std::exp(gamma * view.y[r]);
    const double down = std::exp(-gamma * view.y[r]);
    h += -(g1 - g2) * up + (g1 + g2) * down;
    f += q.q[r] * ((gamma + gamma * gamma) * up +
                   (-gamma + gamma * gamma) * down);
  }
  out.bound = static_cast<double>(h + f);
  return out;
}

bool majorizes(std::span<const double> a, std::span<const double> b,
               double tol) {
  if (a.size() != b.size()) return false;
  long double sa = 0;
  long double sb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
    if (sa + tol < sb) return false;
  }
  return std::abs(static_cast<double>(sa - sb)) <= tol;
}

}  // namespace nba
