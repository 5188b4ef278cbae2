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

#include "nba/enumerate.h"

#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "nba/errors.h"
#include "nba/load_state.h"
#include "nba/rng.h"

namespace nba {
namespace {

struct Node {
  LoadState state;
  ProcessAux aux;
  double prob;
};

std::vector<std::uint64_t> Key(const LoadState& s, const ProcessAux& aux) {
  std::vector<std::uint64_t> key(s.loads().begin(), s.loads().end());
  if (aux.batch) {
    key.insert(key.end(), aux.batch->loads.begin(), aux.batch->loads.end());
  }
  if (aux.window) {
    for (std::uint32_t b : aux.window->Contents()) key.push_back(b);
  }
  return key;
}

std::int64_t ScaledGap(const LoadState& s) {
  return static_cast<std::int64_t>(s.n() * s.max_load()) -
         static_cast<std::int64_t>(s.t());
}

}  // namespace

ExactDistribution enumerate_exact(const ProcessSpec& spec, std::size_t n,
                                  std::uint64_t m,
                                  const std::vector<PotentialSpec>& potentials,
                                  std::uint64_t work_guard) {
  validate(spec);
  if (n == 0) throw ContractViolation("enumerate_exact: n must be >= 1");
  ExactDistribution out;
  out.n = n;
  out.m = m;
  const bool one_choice = std::holds_alternative<OneChoice>(spec);
  const std::uint64_t per_state = one_choice ? n : n * n;

  LoadState start(n);
  std::map<std::vector<std::uint64_t>, Node> layer;
  {
    ProcessAux aux = make_aux(spec, start);
    layer.emplace(Key(start, aux), Node{start, std::move(aux), 1.0});
  }
  auto record_potentials = [&]() {
    std::vector<double> row;
    for (const auto& pot : potentials) {
      long double e = 0;
      for (const auto& [key, node] : layer) {
        e += node.prob * eval_loads(pot, node.state);
      }
      row.push_back(static_cast<double>(e));
    }
    out.expected_potentials.push_back(std::move(row));
  };
  record_potentials();
  out.peak_states = 1;

  std::uint64_t work = 0;
  const double w = one_choice ? 1.0 / n : 1.0 / (static_cast<double>(n) * n);
  for (std::uint64_t t = 0; t < m; ++t) {
    work += layer.size() * per_state;
    if (work > work_guard) {
      throw SizeError("enumerate_exact: n=" + std::to_string(n) +
                      ", m=" + std::to_string(m) + " exceeds the work guard " +
                      std::to_string(work_guard) + "; use Monte Carlo instead");
    }
    std::map<std::vector<std::uint64_t>, Node> next;
    auto push = [&](const Node& from, std::size_t bin, double p) {
      if (p <= 0.0) return;
      LoadState s = from.state;
      ProcessAux a = from.aux;
      commit(spec, s, a, bin);
      auto key = Key(s, a);
      auto it = next.find(key);
      if (it == next.end()) {
        next.emplace(std::move(key), Node{std::move(s), std::move(a), p});
      } else {
        it->second.prob += p;
      }
    };
    for (const auto& [key, node] : layer) {
      if (one_choice) {
        for (std::size_t b = 0; b < n; ++b) push(node, b, node.prob * w);
        continue;
      }
      // Merge the pair outcomes per bin before expanding.
      std::vector<double> to_bin(n, 0.0);
      for (std::size_t i1 = 0; i1 < n; ++i1) {
        for (std::size_t i2 = 0; i2 < n; ++i2) {
          if (i1 == i2) {
            to_bin[i1] += w;
            continue;
          }
          const double p =
              first_choice_probability(spec, node.state, node.aux, i1, i2);
          to_bin[i1] += w * p;
          to_bin[i2] += w * (1.0 - p);
        }
      }
      for (std::size_t b = 0; b < n; ++b) push(node, b, node.prob * to_bin[b]);
    }
    layer = std::move(next);
    out.peak_states = std::max(out.peak_states, layer.size());
    record_potentials();
  }
  for (const auto& [key, node] : layer) {
    out.gap_pmf[ScaledGap(node.state)] += node.prob;
  }
  return out;
}

ScaledGapPmf monte_carlo_gap_pmf(const ProcessSpec& spec, std::size_t n,
                                 std::uint64_t m, std::uint64_t runs,
                                 std::uint64_t seed) {
  std::map<std::int64_t, std::uint64_t> counts;
  for (std::uint64_t r = 0; r < runs; ++r) {
    Rng rng = Substream(seed, r);
    LoadState state(n);
    Process process(spec, state);
    process.Advance(state, rng, m);
    ++counts[ScaledGap(state)];
  }
  ScaledGapPmf pmf;
  for (const auto& [k, c] : counts) {
    pmf[k] = static_cast<double>(c) / static_cast<double>(runs);
  }
  return pmf;
}

double total_variation(const ScaledGapPmf& a, const ScaledGapPmf& b) {
  std::set<std::int64_t> keys;
  for (const auto& [k, v] : a) keys.insert(k);
  for (const auto& [k, v] : b) keys.insert(k);
  double sum = 0.0;
  for (std::int64_t k : keys) {
    const auto ia = a.find(k);
    const auto ib = b.find(k);
    const double pa = ia == a.end() ? 0.0 : ia->second;
    const double pb = ib == b.end() ? 0.0 : ib->second;
    sum += std::abs(pa - pb);
  }
  return 0.5 * sum;
}

bool cdf_dominates(const ScaledGapPmf& a, const ScaledGapPmf& b, double tol) {
  std::set<std::int64_t> keys;
  for (const auto& [k, v] : a) keys.insert(k);
  for (const auto& [k, v] : b) keys.insert(k);
  double ca = 0.0;
  double cb = 0.0;
  for (std::int64_t k : keys) {
    if (auto it = a.find(k); it != a.end()) ca += it->second;
    if (auto it = b.find(k); it != b.end()) cb += it->second;
    if (ca + tol < cb) return false;
  }
  return true;
}

}  // namespace nba
