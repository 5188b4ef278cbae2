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

#include "nba/load_state.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "nba/errors.h"

namespace nba {

LoadState::LoadState(std::size_t n) : x_(n, 0) {
  if (n == 0) throw ContractViolation("LoadState: n must be >= 1");
}

LoadState LoadState::FromLoads(std::vector<std::uint64_t> loads) {
  if (loads.empty()) throw ContractViolation("LoadState: n must be >= 1");
  LoadState s(loads.size());
  s.x_ = std::move(loads);
  s.t_ = std::accumulate(s.x_.begin(), s.x_.end(), std::uint64_t{0});
  s.max_ = *std::max_element(s.x_.begin(), s.x_.end());
  s.min_dirty_ = true;
  return s;
}

std::uint64_t LoadState::min_load() const {
  if (min_dirty_) {
    min_ = *std::min_element(x_.begin(), x_.end());
    min_dirty_ = false;
  }
  return min_;
}

void LoadState::Allocate(std::size_t bin) {
  if (bin >= x_.size()) {
    throw ContractViolation("allocate: bin " + std::to_string(bin) +
                            " out of range for n=" + std::to_string(x_.size()));
  }
  AllocateUnchecked(bin);
}

double gap(const LoadState& state) {
  const auto n = static_cast<std::uint64_t>(state.n());
  // n * max - t is an exact non-negative integer for all practical sizes.
  const unsigned __int128 num =
      static_cast<unsigned __int128>(state.max_load()) * n - state.t();
  return static_cast<double>(num) / static_cast<double>(n);
}

NormalizedView normalized(const LoadState& state) {
  NormalizedView v;
  v.n = state.n();
  v.t = state.t();
  v.rank_to_bin.resize(v.n);
  std::iota(v.rank_to_bin.begin(), v.rank_to_bin.end(), std::size_t{0});
  auto x = state.loads();
  std::stable_sort(v.rank_to_bin.begin(), v.rank_to_bin.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
  v.bin_to_rank.resize(v.n);
  v.y.resize(v.n);
  v.scaled.resize(v.n);
  const auto n = static_cast<std::int64_t>(v.n);
  const auto t = static_cast<std::int64_t>(v.t);
  for (std::size_t r = 0; r < v.n; ++r) {
    const std::size_t bin = v.rank_to_bin[r];
    v.bin_to_rank[bin] = r;
    v.scaled[r] = n * static_cast<std::int64_t>(x[bin]) - t;
    v.y[r] = static_cast<double>(v.scaled[r]) / static_cast<double>(n);
    if (v.scaled[r] >= 0) ++v.overloaded_count;
  }
  v.underloaded_count = v.n - v.overloaded_count;
  return v;
}

}  // namespace nba
