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

#ifndef NBA_LOAD_STATE_H_
#define NBA_LOAD_STATE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nba {

// Integer bin loads plus the ball count and cached extremes.
class LoadState {
 public:
  // n empty bins. Requires n >= 1.
  explicit LoadState(std::size_t n);

  // Arbitrary loads, t := sum(loads). Used by the oracle and tests.
  static LoadState FromLoads(std::vector<std::uint64_t> loads);

  std::size_t n() const { return x_.size(); }
  std::uint64_t t() const { return t_; }
  std::span<const std::uint64_t> loads() const { return x_; }
  std::uint64_t load(std::size_t bin) const { return x_[bin]; }
  std::uint64_t max_load() const { return max_; }
  std::uint64_t min_load() const;

  // Places one ball in `bin`; throws ContractViolation if out of range.
  void Allocate(std::size_t bin);

  // Hot-loop variant without the range check.
  void AllocateUnchecked(std::size_t bin) {
    const std::uint64_t v = ++x_[bin];
    ++t_;
    if (v > max_) max_ = v;
    if (v - 1 == min_) min_dirty_ = true;
  }

 private:
  std::vector<std::uint64_t> x_;
  std::uint64_t t_ = 0;
  std::uint64_t max_ = 0;
  mutable std::uint64_t min_ = 0;
  mutable bool min_dirty_ = false;
};

// Free-function form of LoadState::Allocate.
inline void allocate(LoadState& state, std::size_t bin) { state.Allocate(bin); }

// max_i x_i - t/n.
double gap(const LoadState& state);

// Loads normalized by the average and sorted non-increasingly.
//
// Rank r (0-based) holds bin rank_to_bin[r]. Ties keep the original bin order.
// scaled[r] = n * x - t exactly, so y[r] == scaled[r] / n.
struct NormalizedView {
  std::size_t n = 0;
  std::uint64_t t = 0;
  std::vector<double> y;
  std::vector<std::int64_t> scaled;
  std::vector<std::size_t> rank_to_bin;
  std::vector<std::size_t> bin_to_rank;
  std::size_t overloaded_count = 0;
  std::size_t underloaded_count = 0;
};

NormalizedView normalized(const LoadState& state);

}  // namespace nba

#endif  // NBA_LOAD_STATE_H_
