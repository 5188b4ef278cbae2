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

#include "nba/verify.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nba/constants.h"
#include "nba/errors.h"
#include "nba/load_state.h"
#include "nba/oracle.h"
#include "nba/potentials.h"
#include "nba/process.h"
#include "nba/rng.h"

namespace nba {
namespace {

constexpr double kEps = 1.0 / 12.0;
constexpr double kC4 = 730.0;
constexpr double kD = 365.0;

std::size_t PickSize(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + rng.UniformIndex(hi - lo + 1);
}

// Adversary whose decision in the g-window is a fixed pseudo-random
// probability per (salt, pair).
AdversaryStrategy RandomFractionAdversary(std::uint64_t salt) {
  return AdversaryStrategy::Scripted(
      "random_fraction", [salt](const AdversaryContext& c) {
        const std::uint64_t h = SplitMix64Mix(
            salt ^ (c.first * 0x9E3779B97F4A7C15ULL) ^
            (c.second * 0xC2B2AE3D27D4EB4FULL));
        return static_cast<double>(h >> 11) * 0x1.0p-53;
      });
}

// Any g-Adv-Comp allocation vector: a built-in adversary or a random one.
AllocationVector AdvCompVector(const LoadState& state, std::uint64_t g,
                               Rng& rng) {
  AdversaryStrategy adv;
  switch (rng.UniformIndex(4)) {
    case 0:
      adv = AdversaryStrategy::GreedyMax();
      break;
    case 1:
      adv = AdversaryStrategy::CoinFlip();
      break;
    case 2:
      adv = AdversaryStrategy::AlwaysLighter();
      break;
    default:
      adv = RandomFractionAdversary(rng.NextU64());
  }
  return allocation_vector(GAdvComp{g, adv, false}, state);
}

// Every mass on the most loaded rank: moves mass beyond any g-window.
AllocationVector AllOnTop(const NormalizedView& view) {
  AllocationVector q;
  q.q.assign(view.n, 0.0);
  q.q[0] = 1.0;
  q.rank_to_bin = view.rank_to_bin;
  q.bin_to_rank = view.bin_to_rank;
  return q;
}

std::vector<std::uint64_t> UniformLoads(Rng& rng, std::size_t n,
                                        std::uint64_t max_load) {
  std::vector<std::uint64_t> x(n);
  for (auto& v : x) v = rng.UniformRange(0, max_load);
  return x;
}

// Random loads with one of several spreads, loads <= 2000.
std::vector<std::uint64_t> RandomLoads(Rng& rng, std::size_t n) {
  static constexpr std::uint64_t kSpread[] = {0, 1, 3, 10, 50, 300, 2000};
  const std::uint64_t spread = kSpread[rng.UniformIndex(7)];
  const std::uint64_t base = rng.UniformRange(0, 2000 - spread);
  std::vector<std::uint64_t> x(n);
  for (auto& v : x) v = base + rng.UniformRange(0, spread);
  return x;
}

class Recorder {
 public:
  Recorder(SuiteReport& report, const VerifyOptions& options)
      : report_(report), options_(options) {
    report_.worst_margin = std::numeric_limits<double>::infinity();
  }

  // Records one applicable trial; returns true on violation.
  bool Check(std::uint64_t trial, const NormalizedView& view,
             const AllocationVector& q, double lhs, double rhs,
             const std::string& note = "",
             std::optional<std::pair<std::size_t, std::size_t>> pair = {}) {
    ++report_.applicable;
    const double margin = rhs - lhs;
    report_.worst_margin = std::min(report_.worst_margin, margin);
    const double tol =
        kVerifyRelTol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
    if (margin >= -tol) return false;
    ++report_.violations;
    if (report_.records.size() < options_.max_records) {
      report_.records.push_back({trial, view.y, q.q, lhs, rhs, note, pair});
    }
    return true;
  }

 private:
  SuiteReport& report_;
  const VerifyOptions& options_;
};

// Rank pair (0, j) with the largest load difference, which exceeds g
// whenever the corrupted vector is outside the adversary's power.
std::pair<std::size_t, std::size_t> WidestPair(const NormalizedView& view) {
  return {0, view.n - 1};
}

void SuperExpTrial(std::uint64_t trial, Rng& rng, bool negative,
                   Recorder& rec) {
  if (!negative && trial % 2 == 1) {
    // A natural process vector: n = 64 and a single outlier far beyond g,
    // so the outlier only receives its diagonal mass 1/n^2 <= e^{-phi}/n.
    const std::size_t n = 64;
    std::vector<std::uint64_t> x = UniformLoads(rng, n, 3);
    x[rng.UniformIndex(n)] += rng.UniformRange(8, 60);
    const LoadState state = LoadState::FromLoads(x);
    const NormalizedView view = normalized(state);
    ProcessSpec spec;
    switch (rng.UniformIndex(3)) {
      case 0:
        spec = TwoChoice{};
        break;
      case 1:
        spec = GBounded{rng.UniformRange(0, 3)};
        break;
      default:
        spec = GAdvComp{rng.UniformRange(0, 3),
                        RandomFractionAdversary(rng.NextU64()), false};
    }
    const AllocationVector q = allocation_vector(spec, state);
    const double phi = 4.0 + rng.UniformDouble() * (std::log(64.0) - 4.0);
    // Only the outlier at or above z - 1.
    const double z = std::floor(view.y[0]) + 1.0;
    if (!(view.y[1] < z - 1.0)) return;
    if (!k_event_holds(q, view, phi, z)) return;
    const SuperExpPotential pot{phi, z};
    const double before = eval(pot, view);
    const double lhs = before + expected_change(pot, q, view);
    rec.Check(trial, view, q, lhs, before * (1.0 - 1.0 / n) + 2.0,
              "process vector");
    return;
  }
  const std::size_t n = PickSize(rng, 8, 64);
  const LoadState state = LoadState::FromLoads(
      UniformLoads(rng, n, rng.UniformRange(1, 200)));
  const NormalizedView view = normalized(state);
  const double phi = 4.0 + rng.UniformDouble() * (static_cast<double>(n) - 4.0);
  const double y_max = view.y[0];
  // Keep phi (y + 1 - z) <= 650 and y_max >= z - 1.
  const double z_lo = std::max(1.0, std::ceil(y_max + 1.0 - 650.0 / phi));
  const double z_hi = std::max(1.0, std::floor(y_max + 1.0));
  if (z_lo > z_hi) return;
  const double z =
      negative ? std::max(1.0, std::floor(y_max))
               : z_lo + static_cast<double>(rng.UniformIndex(
                            static_cast<std::uint64_t>(z_hi - z_lo) + 1));
  if (negative && y_max < z) return;
  AllocationVector q = AllOnTop(view);
  if (!negative) {
    // Heavy ranks get at most e^{-phi}/n, the rest is random.
    const double cap = std::exp(-phi) / static_cast<double>(n);
    std::size_t heavy = 0;
    while (heavy < n && view.y[heavy] >= z - 1.0) ++heavy;
    if (heavy == n) return;
    double used = 0.0;
    for (std::size_t r = 0; r < heavy; ++r) {
      q.q[r] = cap * rng.UniformDouble();
      used += q.q[r];
    }
    std::vector<double> w(n - heavy);
    for (auto& v : w) v = rng.UniformDouble() + 1e-3;
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (std::size_t r = heavy; r < n; ++r) {
      q.q[r] = (1.0 - used) * w[r - heavy] / total;
    }
    if (!k_event_holds(q, view, phi, z)) return;
  }
  const SuperExpPotential pot{phi, z};
  const double before = eval(pot, view);
  const double lhs = before + expected_change(pot, q, view);
  rec.Check(trial, view, q, lhs, before * (1.0 - 1.0 / n) + 2.0,
            negative ? "corrupted: all mass on the top rank" : "constructed",
            negative ? std::optional(WidestPair(view)) : std::nullopt);
}

// States with outliers beyond the offset c4 g on both sides.
LoadState OffsetState(Rng& rng, std::size_t n, std::uint64_t g, bool single) {
  const std::uint64_t gap = static_cast<std::uint64_t>(kC4) * g;
  const std::uint64_t base = 2 * gap + 1000;
  std::vector<std::uint64_t> x(n);
  for (auto& v : x) v = base + rng.UniformRange(0, 3 * g);
  const std::size_t cap = std::max<std::size_t>(1, n / 8);
  const std::size_t heavy = single ? 1 : rng.UniformIndex(cap + 1);
  const std::size_t light = single ? 0 : rng.UniformIndex(cap + 1);
  for (std::size_t k = 0; k < heavy; ++k) {
    x[k] += gap + (single ? 300 : rng.UniformRange(0, 320)) - 20;
  }
  for (std::size_t k = 0; k < light; ++k) {
    x[n - 1 - k] -= gap + rng.UniformRange(0, 320) - 20;
  }
  return LoadState::FromLoads(x);
}

double Delta(const NormalizedView& view) {
  double s = 0.0;
  for (double y : view.y) s += std::abs(y);
  return s;
}

void LambdaGoodTrial(std::uint64_t trial, Rng& rng, bool negative,
                     Recorder& rec) {
  static constexpr std::size_t kSizes[] = {8, 16, 32, 64};
  static constexpr std::uint64_t kG[] = {1, 2, 4};
  const std::size_t n = kSizes[rng.UniformIndex(4)];
  const std::uint64_t g = kG[rng.UniformIndex(3)];
  const double alpha =
      trial % 2 == 0 ? 1.0 / 18.0 : (0.01 + rng.UniformDouble() * (1.0 / 18.0 - 0.01));
  const LoadState state = OffsetState(rng, n, g, negative);
  const NormalizedView view = normalized(state);
  if (Delta(view) > kD * static_cast<double>(n * g)) return;
  const AllocationVector q = negative ? AllOnTop(view) : AdvCompVector(state, g, rng);
  const LambdaPotential pot{alpha, kC4 * static_cast<double>(g)};
  const double before = eval(pot, view);
  const double lhs = before + expected_change(pot, q, view);
  const double rhs =
      before * (1.0 - 2.0 * alpha * kEps / static_cast<double>(n)) + 18.0 * alpha;
  rec.Check(trial, view, q, lhs, rhs,
            negative ? "corrupted: all mass on the top rank" : "",
            negative ? std::optional(WidestPair(view)) : std::nullopt);
}

void LambdaAnyTrial(std::uint64_t trial, Rng& rng, bool negative,
                    Recorder& rec) {
  const std::size_t n = PickSize(rng, 2, 64);
  const double alpha = 0.5 * (1.0 - rng.UniformDouble());  // (0, 1/2]
  LoadState state = negative
                        ? OffsetState(rng, std::max<std::size_t>(n, 8), 1, true)
                        : LoadState::FromLoads(RandomLoads(rng, n));
  const NormalizedView view = normalized(state);
  const double y_abs = std::max(std::abs(view.y.front()), std::abs(view.y.back()));
  const double min_offset = std::max(0.0, y_abs + 1.0 - 650.0 / alpha);
  const double offset = negative ? kC4 : min_offset + rng.UniformDouble() * 40.0;
  AllocationVector q;
  if (negative) {
    q = AllOnTop(view);
  } else if (trial % 2 == 0) {
    q = AdvCompVector(state, rng.UniformRange(0, 8), rng);
  } else {
    // Random vector capped at 2/n by water-filling.
    q = AllOnTop(view);
    const std::size_t m = view.n;
    std::vector<double> w(m);
    for (auto& v : w) v = -std::log(1.0 - rng.UniformDouble());
    const double cap = 2.0 / static_cast<double>(m);
    std::vector<bool> fixed(m, false);
    double free_mass = 1.0;
    for (int round = 0; round < 64; ++round) {
      double wsum = 0.0;
      for (std::size_t r = 0; r < m; ++r) {
        if (!fixed[r]) wsum += w[r];
      }
      bool changed = false;
      for (std::size_t r = 0; r < m; ++r) {
        if (fixed[r]) continue;
        q.q[r] = free_mass * w[r] / wsum;
        if (q.q[r] > cap) {
          q.q[r] = cap;
          fixed[r] = true;
          free_mass -= cap;
          changed = true;
        }
      }
      if (!changed) break;
    }
  }
  const double max_q = *std::max_element(q.q.begin(), q.q.end());
  if (!negative && max_q > 2.0 / static_cast<double>(view.n)) return;
  const LambdaPotential pot{alpha, offset};
  const double before = eval(pot, view);
  const double lhs = before + expected_change(pot, q, view);
  const double rhs = before * (1.0 + 3.0 * alpha / static_cast<double>(view.n));
  rec.Check(trial, view, q, lhs, rhs,
            negative ? "corrupted: max q exceeds 2/n" : "",
            negative ? std::optional(WidestPair(view)) : std::nullopt);
}

void QuadraticTrial(std::uint64_t trial, Rng& rng, bool negative,
                    Recorder& rec) {
  static constexpr std::uint64_t kG[] = {0, 1, 2, 4, 8};
  const std::size_t n = PickSize(rng, 2, 64);
  const std::uint64_t g = kG[rng.UniformIndex(5)];
  std::vector<std::uint64_t> x = RandomLoads(rng, n);
  if (negative) {
    // Make the top bin clear the g-window by a margin.
    x[0] = *std::max_element(x.begin(), x.end()) + 2 * g + 3;
  }
  const LoadState state = LoadState::FromLoads(x);
  const NormalizedView view = normalized(state);
  const AllocationVector q = negative ? AllOnTop(view) : AdvCompVector(state, g, rng);
  const double lhs = expected_change(QuadraticPotential{}, q, view);
  const double rhs = -Delta(view) / static_cast<double>(n) + 2.0 * g + 1.0;
  rec.Check(trial, view, q, lhs, rhs,
            negative ? "corrupted: mass moved beyond the g-window" : "",
            negative ? std::optional(WidestPair(view)) : std::nullopt);
}

void TwoChoiceQuadraticTrial(std::uint64_t trial, Rng& rng, bool negative,
                             Recorder& rec) {
  const std::size_t n = PickSize(rng, 2, 64);
  std::vector<std::uint64_t> x = RandomLoads(rng, n);
  if (negative) x[0] = *std::max_element(x.begin(), x.end()) + 3;
  const LoadState state = LoadState::FromLoads(x);
  const NormalizedView view = normalized(state);
  const AllocationVector q =
      negative ? AllOnTop(view) : allocation_vector(TwoChoice{}, state);
  const double lhs = expected_change(QuadraticPotential{}, q, view);
  const double rhs = -Delta(view) / static_cast<double>(n) + 1.0;
  rec.Check(trial, view, q, lhs, rhs,
            negative ? "corrupted: all mass on the top rank" : "",
            negative ? std::optional(WidestPair(view)) : std::nullopt);
}

void GammaTrial(std::uint64_t trial, Rng& rng, bool negative, Recorder& rec) {
  const std::size_t n = PickSize(rng, 2, 32);
  const double gamma = std::exp(std::log(1e-3) * rng.UniformDouble()) * 0.999;
  std::vector<std::uint64_t> x = UniformLoads(rng, n, rng.UniformRange(0, 200));
  const LoadState state = LoadState::FromLoads(x);
  const NormalizedView view = normalized(state);
  ProcessSpec spec;
  switch (rng.UniformIndex(5)) {
    case 0:
      spec = OneChoice{};
      break;
    case 1:
      spec = TwoChoice{};
      break;
    case 2:
      spec = GBounded{rng.UniformRange(0, 6)};
      break;
    case 3:
      spec = GMyopicComp{rng.UniformRange(0, 6)};
      break;
    default:
      spec = GAdvComp{rng.UniformRange(0, 6),
                      RandomFractionAdversary(rng.NextU64()), false};
  }
  const AllocationVector q = allocation_vector(spec, state);
  GammaBoundCheck check = check_gamma_bound(q, view, gamma);
  if (negative) {
    // Drop the second-order terms of the bound: no longer an upper bound.
    const double nd = static_cast<double>(n);
    double second_order = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double up = std::exp(gamma * view.y[r]);
      const double down = std::exp(-gamma * view.y[r]);
      second_order += gamma * gamma / (nd * nd) * (up + down) +
                      q.q[r] * gamma * gamma * (up + down);
    }
    check.bound -= 2.0 * second_order;
  }
  rec.Check(trial, view, q, check.exact, check.bound,
            negative ? "corrupted: bound without second-order terms" : "");
}

}  // namespace

std::string suite_name(DropSuite suite) {
  switch (suite) {
    case DropSuite::kSuperExp:
      return "super_exp";
    case DropSuite::kLambdaGood:
      return "lambda_good";
    case DropSuite::kLambdaAny:
      return "lambda_any";
    case DropSuite::kQuadratic:
      return "quadratic";
    case DropSuite::kGamma:
      return "gamma";
    case DropSuite::kTwoChoiceQuadratic:
      return "two_choice_quadratic";
  }
  return "unknown";
}

DropSuite parse_suite(const std::string& name) {
  if (name == "a" || name == "super_exp") return DropSuite::kSuperExp;
  if (name == "b" || name == "lambda_good") return DropSuite::kLambdaGood;
  if (name == "c" || name == "lambda_any") return DropSuite::kLambdaAny;
  if (name == "d" || name == "quadratic") return DropSuite::kQuadratic;
  if (name == "gamma") return DropSuite::kGamma;
  if (name == "two_choice_quadratic") return DropSuite::kTwoChoiceQuadratic;
  throw ConfigError("unknown suite '" + name +
                    "' (expected super_exp|a, lambda_good|b, lambda_any|c, "
                    "quadratic|d, gamma, two_choice_quadratic)");
}

std::vector<DropSuite> default_suites() {
  return {DropSuite::kSuperExp,  DropSuite::kLambdaGood,
          DropSuite::kLambdaAny, DropSuite::kQuadratic,
          DropSuite::kGamma,     DropSuite::kTwoChoiceQuadratic};
}

SuiteReport run_suite(DropSuite suite, const VerifyOptions& options) {
  if (options.trials == 0) throw ConfigError("verify: trials must be >= 1");
  SuiteReport report;
  report.suite = suite_name(suite);
  report.negative_control = options.negative_control;
  report.trials = options.trials;
  Recorder rec(report, options);
  const std::uint64_t stream_base = (static_cast<std::uint64_t>(suite) + 1) << 40;
  for (std::uint64_t trial = 0; trial < options.trials; ++trial) {
    Rng rng = Substream(options.seed, stream_base + trial);
    const bool neg = options.negative_control;
    switch (suite) {
      case DropSuite::kSuperExp:
        SuperExpTrial(trial, rng, neg, rec);
        break;
      case DropSuite::kLambdaGood:
        LambdaGoodTrial(trial, rng, neg, rec);
        break;
      case DropSuite::kLambdaAny:
        LambdaAnyTrial(trial, rng, neg, rec);
        break;
      case DropSuite::kQuadratic:
        QuadraticTrial(trial, rng, neg, rec);
        break;
      case DropSuite::kGamma:
        GammaTrial(trial, rng, neg, rec);
        break;
      case DropSuite::kTwoChoiceQuadratic:
        TwoChoiceQuadraticTrial(trial, rng, neg, rec);
        break;
    }
  }
  if (report.applicable == 0) report.worst_margin = 0.0;
  return report;
}

std::vector<SuiteReport> verify_drop_inequalities(
    const std::vector<DropSuite>& suites, const VerifyOptions& options) {
  std::vector<SuiteReport> out;
  for (DropSuite s : suites) out.push_back(run_suite(s, options));
  return out;
}

}  // namespace nba
