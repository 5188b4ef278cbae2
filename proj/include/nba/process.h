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

#ifndef NBA_PROCESS_H_
#define NBA_PROCESS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nba/load_state.h"
#include "nba/rng.h"

namespace nba {

// Probability that a comparison of two bins with load difference delta is
// decided correctly. Represented as a table for small delta plus a constant
// tail, optionally falling back to the sigma formula beyond the table.
class RhoFunction {
 public:
  RhoFunction() = default;
  static RhoFunction Constant(double value);
  static RhoFunction Table(std::vector<double> values, double tail);
  // 0 for delta <= g, 1 above.
  static RhoFunction Step(std::uint64_t g);
  // 1 - exp(-(delta/sigma)^2) / 2.
  static RhoFunction Sigma(double sigma);

  double operator()(std::uint64_t delta) const {
    if (delta < table_.size()) return table_[delta];
    return sigma_ > 0 ? Formula(delta) : tail_;
  }

  const std::vector<double>& table() const { return table_; }
  double tail() const { return tail_; }
  double sigma() const { return sigma_; }

  // Throws ParameterError unless values lie in [0,1] and are non-decreasing.
  void Validate() const;

 private:
  double Formula(std::uint64_t delta) const;

  std::vector<double> table_;
  double tail_ = 1.0;
  double sigma_ = 0.0;
};

double rho_sigma(double delta, double sigma);

// What an adversary sees when asked to decide a comparison.
struct AdversaryContext {
  std::uint64_t step = 0;  // 1-based index of the ball being placed
  std::size_t first = 0;
  std::size_t second = 0;
  std::span<const std::uint64_t> loads;
  std::uint64_t g = 0;
};

// Adversary for g-Adv-Comp. The callback returns the probability of sending
// the ball to `first`; the framework flips the coin, so the oracle can use
// the same callback analytically. Outside the g-window the framework
// overrides the callback and picks the lighter bin.
struct AdversaryStrategy {
  std::string name;
  std::function<double(const AdversaryContext&)> first_probability;

  static AdversaryStrategy GreedyMax();
  static AdversaryStrategy CoinFlip();
  static AdversaryStrategy AlwaysLighter();
  static AdversaryStrategy Scripted(
      std::string name, std::function<double(const AdversaryContext&)> fn);
  // greedy_max | coin_flip | always_lighter. Throws ParameterError otherwise.
  static AdversaryStrategy FromName(const std::string& name);
};

class DelayWindow;

struct StalenessContext {
  std::size_t bin = 0;
  std::uint64_t step = 0;  // 1-based index of the ball being placed
  std::uint64_t current = 0;  // x^{t-1}
  std::uint64_t oldest = 0;   // x^{t-tau}
  const DelayWindow* window = nullptr;
};

enum class StalenessKind {
  kOldest,
  kFreshest,
  kRandomInWindow,
  kBatchBoundary,
  kCustom,
};

// Load estimate used by tau-Delay. Estimates are clamped to
// [x^{t-tau}, x^{t-1}] by the framework.
struct StalenessStrategy {
  StalenessKind kind = StalenessKind::kOldest;
  std::string name = "oldest";
  std::uint64_t batch = 0;  // kBatchBoundary only
  std::function<std::uint64_t(const StalenessContext&, Rng&)> custom;

  static StalenessStrategy Oldest();
  static StalenessStrategy Freshest();
  static StalenessStrategy RandomInWindow();
  // Load at the last multiple of b before the current step.
  static StalenessStrategy BatchBoundary(std::uint64_t b);
  static StalenessStrategy Custom(
      std::string name,
      std::function<std::uint64_t(const StalenessContext&, Rng&)> fn);
  // oldest | freshest | random_in_window. Throws ParameterError otherwise.
  static StalenessStrategy FromName(const std::string& name);
};

// The allocations of the last tau - 1 steps, i.e. exactly what separates
// x^{t-tau} from x^{t-1} when the ball of step t is being placed.
class DelayWindow {
 public:
  DelayWindow(std::size_t n, std::uint64_t tau);

  std::uint64_t tau() const { return tau_; }
  // Number of allocations recorded so far (the current t - 1).
  std::uint64_t steps() const { return steps_; }
  std::size_t stored() const { return size_; }

  // Records the allocation of the next step.
  void Record(std::size_t bin);

  // Allocations to `bin` inside the window.
  std::uint64_t InWindow(std::size_t bin) const { return counts_[bin]; }
  std::uint64_t OldestLoad(std::size_t bin, std::uint64_t current) const {
    return current - counts_[bin];
  }
  // x^s for s in [steps() + 1 - tau, steps()]. Cost O(steps() - s).
  std::uint64_t LoadAt(std::size_t bin, std::uint64_t current,
                       std::uint64_t s) const;

  // Window contents, oldest first.
  std::vector<std::uint32_t> Contents() const;

 private:
  std::uint64_t tau_;
  std::uint64_t steps_ = 0;
  std::vector<std::uint32_t> ring_;
  std::size_t head_ = 0;  // index of the oldest entry
  std::size_t size_ = 0;
  std::vector<std::uint32_t> counts_;
};

std::uint64_t stale_estimate(const DelayWindow& window, std::size_t bin,
                             std::uint64_t current);

struct OneChoice {};

enum class TieBreak { kRandom, kLowerIndex };
struct TwoChoice {
  TieBreak tie_break = TieBreak::kRandom;
};

struct OnePlusBeta {
  double beta = 1.0;
};

struct GBounded {
  std::uint64_t g = 0;
};

struct GMyopicComp {
  std::uint64_t g = 0;
};

struct NoisyComp {
  RhoFunction rho;
};

enum class SigmaMode { kRhoFormula, kGaussianEstimates };
struct SigmaNoisyLoad {
  double sigma = 1.0;
  SigmaMode mode = SigmaMode::kRhoFormula;
};

struct GAdvComp {
  std::uint64_t g = 0;
  AdversaryStrategy adversary = AdversaryStrategy::GreedyMax();
  bool strict = false;  // count callback decisions the framework overrode
};

struct BBatch {
  std::uint64_t b = 1;
};

struct TauDelay {
  std::uint64_t tau = 1;
  StalenessStrategy staleness = StalenessStrategy::Oldest();
};

using ProcessSpec =
    std::variant<OneChoice, TwoChoice, OnePlusBeta, GBounded, GMyopicComp,
                 NoisyComp, SigmaNoisyLoad, GAdvComp, BBatch, TauDelay>;

// Config name, e.g. "g_bounded".
std::string process_name(const ProcessSpec& spec);

// Throws ParameterError if a field is outside its domain.
void validate(const ProcessSpec& spec);

// Loads as of the last batch boundary plus the bins touched since then.
struct BatchSnapshot {
  std::vector<std::uint64_t> loads;
  std::vector<std::size_t> touched;
  std::vector<char> is_touched;
  std::uint64_t taken_at = 0;
};

// Per-run state some processes need besides the loads.
struct ProcessAux {
  std::optional<BatchSnapshot> batch;
  std::optional<DelayWindow> window;
  std::uint64_t adversary_violations = 0;
};

// Aux matching `spec`, treating `state` as the latest batch boundary and as
// having no allocations inside the delay window.
ProcessAux make_aux(const ProcessSpec& spec, const LoadState& state);

// Winner index within the pair (0 or 1) of a rho-noisy comparison.
int decide_noisy_comparison(std::uint64_t load1, std::uint64_t load2,
                            const RhoFunction& rho, Rng& rng);

// Lighter bin of the pair by snapshot load; ties uniformly at random.
std::size_t batch_snapshot_decide(std::span<const std::uint64_t> snapshot,
                                  std::size_t i1, std::size_t i2, Rng& rng);

// Exact probability that the ball goes to i1 given the sampled pair (i1, i2).
// Throws ContractViolation for strategies with no analytic form (custom
// staleness) or when aux does not match spec.
double first_choice_probability(const ProcessSpec& spec,
                                const LoadState& state, const ProcessAux& aux,
                                std::size_t i1, std::size_t i2);

// Chooses the bin for the next ball. Does not allocate.
std::size_t step(const ProcessSpec& spec, const LoadState& state,
                 ProcessAux& aux, Rng& rng);

// Allocates to `bin` and updates aux.
void commit(const ProcessSpec& spec, LoadState& state, ProcessAux& aux,
            std::size_t bin);

// A process bound to one run: spec, aux and a specialized stepping loop.
class Process {
 public:
  Process(ProcessSpec spec, const LoadState& initial);

  const ProcessSpec& spec() const { return spec_; }
  const ProcessAux& aux() const { return aux_; }

  std::size_t Step(const LoadState& state, Rng& rng);
  void Commit(LoadState& state, std::size_t bin);
  // Steps and commits `count` balls.
  void Advance(LoadState& state, Rng& rng, std::uint64_t count);

 private:
  ProcessSpec spec_;
  ProcessAux aux_;
  RhoFunction rho_;  // NoisyComp / SigmaNoisyLoad lookup table
};

}  // namespace nba

#endif  // NBA_PROCESS_H_
