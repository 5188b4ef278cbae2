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

#include "nba/process.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>
#include <utility>

#include "nba/errors.h"

namespace nba {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Probability that the first bin wins under a noiseless comparison with
// random tie-breaking.
inline double LighterFirst(std::uint64_t a, std::uint64_t b) {
  return a < b ? 1.0 : (a > b ? 0.0 : 0.5);
}

// Lighter bin wins with probability rho; ties are a fair coin.
inline double RhoFirst(std::uint64_t a, std::uint64_t b, double rho) {
  if (a == b) return 0.5;
  return a < b ? rho : 1.0 - rho;
}

inline std::uint64_t AbsDiff(std::uint64_t a, std::uint64_t b) {
  return a > b ? a - b : b - a;
}

// The single place where a decision probability becomes a bin. A coin is
// drawn only for genuinely randomized decisions, so processes that share a
// probability also share their random draws.
inline std::size_t Pick(std::size_t i1, std::size_t i2, double p_first,
                        Rng& rng) {
  if (i1 == i2 || p_first >= 1.0) return i1;
  if (p_first <= 0.0) return i2;
  return rng.Bernoulli(p_first) ? i1 : i2;
}

double TwoChoiceFirst(const TwoChoice& s, std::uint64_t a, std::uint64_t b,
                      std::size_t i1, std::size_t i2) {
  if (a == b && s.tie_break == TieBreak::kLowerIndex) {
    return i1 <= i2 ? 1.0 : 0.0;
  }
  return LighterFirst(a, b);
}

double GBoundedFirst(std::uint64_t g, std::uint64_t a, std::uint64_t b) {
  if (AbsDiff(a, b) <= g) return a > b ? 1.0 : (a < b ? 0.0 : 0.5);
  return LighterFirst(a, b);
}

double GMyopicFirst(std::uint64_t g, std::uint64_t a, std::uint64_t b) {
  if (AbsDiff(a, b) <= g) return 0.5;
  return LighterFirst(a, b);
}

double GaussianFirst(double sigma, std::uint64_t a, std::uint64_t b) {
  // P(a + sigma Z1 < b + sigma Z2) = Phi((b - a) / (sqrt(2) sigma)).
  const double d = static_cast<double>(a) - static_cast<double>(b);
  return 0.5 * std::erfc(d / (2.0 * sigma));
}

double AdvFirst(const GAdvComp& s, const LoadState& state, std::size_t i1,
                std::size_t i2, std::uint64_t* violations) {
  const std::uint64_t a = state.load(i1);
  const std::uint64_t b = state.load(i2);
  if (AbsDiff(a, b) <= s.g) {
    AdversaryContext ctx{state.t() + 1, i1, i2, state.loads(), s.g};
    return std::clamp(s.adversary.first_probability(ctx), 0.0, 1.0);
  }
  if (s.strict && violations != nullptr && i1 != i2) {
    AdversaryContext ctx{state.t() + 1, i1, i2, state.loads(), s.g};
    const double p = s.adversary.first_probability(ctx);
    if ((a > b && p > 0.0) || (a < b && p < 1.0)) ++*violations;
  }
  return LighterFirst(a, b);
}

// Batch boundary time for the ball of step t = steps + 1.
std::uint64_t BoundaryTime(std::uint64_t steps, std::uint64_t b) {
  return (steps / b) * b;
}

std::uint64_t Estimate(const TauDelay& s, const DelayWindow& w,
                       const LoadState& state, std::size_t bin, Rng& rng) {
  const std::uint64_t cur = state.load(bin);
  const std::uint64_t old = w.OldestLoad(bin, cur);
  switch (s.staleness.kind) {
    case StalenessKind::kOldest:
      return old;
    case StalenessKind::kFreshest:
      return cur;
    case StalenessKind::kRandomInWindow:
      return rng.UniformRange(old, cur);
    case StalenessKind::kBatchBoundary:
      return w.LoadAt(bin, cur, BoundaryTime(w.steps(), s.staleness.batch));
    case StalenessKind::kCustom: {
      StalenessContext ctx{bin, state.t() + 1, cur, old, &w};
      return std::clamp(s.staleness.custom(ctx, rng), old, cur);
    }
  }
  return old;
}

void CheckAux(const ProcessSpec& spec, const LoadState& state,
              const ProcessAux& aux) {
  if (std::holds_alternative<BBatch>(spec)) {
    if (!aux.batch || aux.batch->loads.size() != state.n()) {
      throw ContractViolation("b_batch requires a batch snapshot over n bins");
    }
  } else if (std::holds_alternative<TauDelay>(spec)) {
    if (!aux.window) {
      throw ContractViolation("tau_delay requires a delay window");
    }
    if (aux.window->tau() != std::get<TauDelay>(spec).tau) {
      throw ContractViolation("delay window tau does not match the spec");
    }
  }
}

void RefreshSnapshot(BatchSnapshot& snap, const LoadState& state) {
  for (std::size_t bin : snap.touched) {
    snap.loads[bin] = state.load(bin);
    snap.is_touched[bin] = 0;
  }
  snap.touched.clear();
  snap.taken_at = state.t();
}

void CommitAux(const ProcessSpec& spec, const LoadState& state,
               ProcessAux& aux, std::size_t bin) {
  if (const auto* bb = std::get_if<BBatch>(&spec)) {
    BatchSnapshot& snap = *aux.batch;
    if (!snap.is_touched[bin]) {
      snap.is_touched[bin] = 1;
      snap.touched.push_back(bin);
    }
    if (state.t() % bb->b == 0) RefreshSnapshot(snap, state);
  } else if (std::holds_alternative<TauDelay>(spec)) {
    aux.window->Record(bin);
  }
}

}  // namespace

RhoFunction RhoFunction::Constant(double value) {
  RhoFunction r;
  r.tail_ = value;
  return r;
}

RhoFunction RhoFunction::Table(std::vector<double> values, double tail) {
  RhoFunction r;
  r.table_ = std::move(values);
  r.tail_ = tail;
  return r;
}

RhoFunction RhoFunction::Step(std::uint64_t g) {
  return Table(std::vector<double>(g + 1, 0.0), 1.0);
}

RhoFunction RhoFunction::Sigma(double sigma) {
  if (!(sigma > 0) || !std::isfinite(sigma)) {
    throw ParameterError("sigma must be a positive finite real");
  }
  RhoFunction r;
  r.sigma_ = sigma;
  r.tail_ = 1.0;
  // Table until the formula rounds to 1, capped to keep memory bounded.
  constexpr std::size_t kMaxTable = std::size_t{1} << 22;
  for (std::size_t d = 0; d < kMaxTable; ++d) {
    const double v = rho_sigma(static_cast<double>(d), sigma);
    r.table_.push_back(v);
    if (v == 1.0) {
      r.sigma_ = 0.0;  // table plus tail 1 is exact from here on
      break;
    }
  }
  return r;
}

double RhoFunction::Formula(std::uint64_t delta) const {
  return rho_sigma(static_cast<double>(delta), sigma_);
}

void RhoFunction::Validate() const {
  double prev = 0.0;
  for (std::size_t d = 0; d < table_.size(); ++d) {
    const double v = table_[d];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ParameterError("rho(" + std::to_string(d) + ") outside [0,1]");
    }
    if (v < prev) {
      throw ParameterError("rho must be non-decreasing; drops at delta=" +
                           std::to_string(d));
    }
    prev = v;
  }
  if (!(tail_ >= 0.0 && tail_ <= 1.0)) {
    throw ParameterError("rho tail outside [0,1]");
  }
  if (sigma_ == 0.0 && tail_ < prev) {
    throw ParameterError("rho must be non-decreasing; tail below table");
  }
}

double rho_sigma(double delta, double sigma) {
  if (!(sigma > 0)) throw ParameterError("rho_sigma: sigma must be > 0");
  if (!(delta >= 0)) throw ParameterError("rho_sigma: delta must be >= 0");
  const double z = delta / sigma;
  return 1.0 - 0.5 * std::exp(-z * z);
}

AdversaryStrategy AdversaryStrategy::GreedyMax() {
  return {"greedy_max", [](const AdversaryContext& c) {
            const auto a = c.loads[c.first];
            const auto b = c.loads[c.second];
            if (AbsDiff(a, b) > c.g) return LighterFirst(a, b);
            return a > b ? 1.0 : (a < b ? 0.0 : 0.5);
          }};
}

AdversaryStrategy AdversaryStrategy::CoinFlip() {
  return {"coin_flip", [](const AdversaryContext& c) {
            const auto a = c.loads[c.first];
            const auto b = c.loads[c.second];
            return AbsDiff(a, b) > c.g ? LighterFirst(a, b) : 0.5;
          }};
}

AdversaryStrategy AdversaryStrategy::AlwaysLighter() {
  return {"always_lighter", [](const AdversaryContext& c) {
            return LighterFirst(c.loads[c.first], c.loads[c.second]);
          }};
}

AdversaryStrategy AdversaryStrategy::Scripted(
    std::string name, std::function<double(const AdversaryContext&)> fn) {
  return {std::move(name), std::move(fn)};
}

AdversaryStrategy AdversaryStrategy::FromName(const std::string& name) {
  if (name == "greedy_max") return GreedyMax();
  if (name == "coin_flip") return CoinFlip();
  if (name == "always_lighter") return AlwaysLighter();
  throw ParameterError("unknown adversary '" + name +
                       "' (expected greedy_max, coin_flip, always_lighter)");
}

StalenessStrategy StalenessStrategy::Oldest() {
  return {StalenessKind::kOldest, "oldest", 0, nullptr};
}

StalenessStrategy StalenessStrategy::Freshest() {
  return {StalenessKind::kFreshest, "freshest", 0, nullptr};
}

StalenessStrategy StalenessStrategy::RandomInWindow() {
  return {StalenessKind::kRandomInWindow, "random_in_window", 0, nullptr};
}

StalenessStrategy StalenessStrategy::BatchBoundary(std::uint64_t b) {
  if (b == 0) throw ParameterError("batch_boundary: b must be >= 1");
  return {StalenessKind::kBatchBoundary, "batch_boundary", b, nullptr};
}

StalenessStrategy StalenessStrategy::Custom(
    std::string name,
    std::function<std::uint64_t(const StalenessContext&, Rng&)> fn) {
  return {StalenessKind::kCustom, std::move(name), 0, std::move(fn)};
}

StalenessStrategy StalenessStrategy::FromName(const std::string& name) {
  if (name == "oldest") return Oldest();
  if (name == "freshest") return Freshest();
  if (name == "random_in_window") return RandomInWindow();
  throw ParameterError("unknown staleness '" + name +
                       "' (expected oldest, freshest, random_in_window)");
}

DelayWindow::DelayWindow(std::size_t n, std::uint64_t tau)
    : tau_(tau), ring_(tau > 0 ? tau - 1 : 0), counts_(n, 0) {
  if (tau == 0) throw ParameterError("tau must be >= 1");
}

void DelayWindow::Record(std::size_t bin) {
  ++steps_;
  if (ring_.empty()) return;
  if (size_ == ring_.size()) {
    --counts_[ring_[head_]];
    ring_[head_] = static_cast<std::uint32_t>(bin);
    head_ = head_ + 1 == ring_.size() ? 0 : head_ + 1;
  } else {
    std::size_t pos = head_ + size_;
    if (pos >= ring_.size()) pos -= ring_.size();
    ring_[pos] = static_cast<std::uint32_t>(bin);
    ++size_;
  }
  ++counts_[bin];
}

std::uint64_t DelayWindow::LoadAt(std::size_t bin, std::uint64_t current,
                                  std::uint64_t s) const {
  // Entries cover steps steps_ - size_ + 1 .. steps_.
  std::uint64_t load = current;
  std::uint64_t step = steps_;
  for (std::size_t k = 0; k < size_ && step > s; ++k, --step) {
    std::size_t pos = head_ + size_ - 1 - k;
    if (pos >= ring_.size()) pos -= ring_.size();
    if (ring_[pos] == bin) --load;
  }
  return load;
}

std::vector<std::uint32_t> DelayWindow::Contents() const {
  std::vector<std::uint32_t> out;
  out.reserve(size_);
  for (std::size_t k = 0; k < size_; ++k) {
    std::size_t pos = head_ + k;
    if (pos >= ring_.size()) pos -= ring_.size();
    out.push_back(ring_[pos]);
  }
  return out;
}

std::uint64_t stale_estimate(const DelayWindow& window, std::size_t bin,
                             std::uint64_t current) {
  return window.OldestLoad(bin, current);
}

std::string process_name(const ProcessSpec& spec) {
  return std::visit(
      Overloaded{
          [](const OneChoice&) { return std::string("one_choice"); },
          [](const TwoChoice&) { return std::string("two_choice"); },
          [](const OnePlusBeta&) { return std::string("one_plus_beta"); },
          [](const GBounded&) { return std::string("g_bounded"); },
          [](const GMyopicComp&) { return std::string("g_myopic_comp"); },
          [](const NoisyComp&) { return std::string("noisy_comp"); },
          [](const SigmaNoisyLoad&) { return std::string("sigma_noisy_load"); },
          [](const GAdvComp&) { return std::string("g_adv_comp"); },
          [](const BBatch&) { return std::string("b_batch"); },
          [](const TauDelay&) { return std::string("tau_delay"); },
      },
      spec);
}

void validate(const ProcessSpec& spec) {
  std::visit(
      Overloaded{
          [](const OnePlusBeta& s) {
            if (!(s.beta > 0.0 && s.beta <= 1.0)) {
              throw ParameterError("one_plus_beta: beta must be in (0,1]");
            }
          },
          [](const NoisyComp& s) { s.rho.Validate(); },
          [](const SigmaNoisyLoad& s) {
            if (!(s.sigma > 0.0) || !std::isfinite(s.sigma)) {
              throw ParameterError("sigma_noisy_load: sigma must be > 0");
            }
          },
          [](const GAdvComp& s) {
            if (!s.adversary.first_probability) {
              throw ParameterError("g_adv_comp: adversary has no callback");
            }
          },
          [](const BBatch& s) {
            if (s.b == 0) throw ParameterError("b_batch: b must be >= 1");
          },
          [](const TauDelay& s) {
            if (s.tau == 0) throw ParameterError("tau_delay: tau must be >= 1");
            if (s.staleness.kind == StalenessKind::kCustom &&
                !s.staleness.custom) {
              throw ParameterError("tau_delay: custom staleness has no callback");
            }
            if (s.staleness.kind == StalenessKind::kBatchBoundary &&
                s.staleness.batch == 0) {
              throw ParameterError("tau_delay: batch_boundary needs b >= 1");
            }
          },
          [](const auto&) {},
      },
      spec);
}

ProcessAux make_aux(const ProcessSpec& spec, const LoadState& state) {
  ProcessAux aux;
  if (std::holds_alternative<BBatch>(spec)) {
    BatchSnapshot snap;
    snap.loads.assign(state.loads().begin(), state.loads().end());
    snap.is_touched.assign(state.n(), 0);
    snap.taken_at = state.t();
    aux.batch = std::move(snap);
  } else if (const auto* td = std::get_if<TauDelay>(&spec)) {
    aux.window.emplace(state.n(), td->tau);
  }
  return aux;
}

int decide_noisy_comparison(std::uint64_t load1, std::uint64_t load2,
                            const RhoFunction& rho, Rng& rng) {
  const double p = RhoFirst(load1, load2, rho(AbsDiff(load1, load2)));
  if (p >= 1.0) return 0;
  if (p <= 0.0) return 1;
  return rng.Bernoulli(p) ? 0 : 1;
}

std::size_t batch_snapshot_decide(std::span<const std::uint64_t> snapshot,
                                  std::size_t i1, std::size_t i2, Rng& rng) {
  return Pick(i1, i2, LighterFirst(snapshot[i1], snapshot[i2]), rng);
}

double first_choice_probability(const ProcessSpec& spec,
                                const LoadState& state, const ProcessAux& aux,
                                std::size_t i1, std::size_t i2) {
  CheckAux(spec, state, aux);
  const std::uint64_t a = state.load(i1);
  const std::uint64_t b = state.load(i2);
  return std::visit(
      Overloaded{
          [&](const OneChoice&) { return 0.5; },
          [&](const TwoChoice& s) { return TwoChoiceFirst(s, a, b, i1, i2); },
          [&](const OnePlusBeta& s) {
            return RhoFirst(a, b, 0.5 + 0.5 * s.beta);
          },
          [&](const GBounded& s) { return GBoundedFirst(s.g, a, b); },
          [&](const GMyopicComp& s) { return GMyopicFirst(s.g, a, b); },
          [&](const NoisyComp& s) {
            return RhoFirst(a, b, s.rho(AbsDiff(a, b)));
          },
          [&](const SigmaNoisyLoad& s) {
            if (s.mode == SigmaMode::kGaussianEstimates) {
              return GaussianFirst(s.sigma, a, b);
            }
            return RhoFirst(a, b,
                            rho_sigma(static_cast<double>(AbsDiff(a, b)),
                                      s.sigma));
          },
          [&](const GAdvComp& s) { return AdvFirst(s, state, i1, i2, nullptr); },
          [&](const BBatch&) {
            return LighterFirst(aux.batch->loads[i1], aux.batch->loads[i2]);
          },
          [&](const TauDelay& s) -> double {
            const DelayWindow& w = *aux.window;
            const std::uint64_t lo1 = w.OldestLoad(i1, a);
            const std::uint64_t lo2 = w.OldestLoad(i2, b);
            switch (s.staleness.kind) {
              case StalenessKind::kOldest:
                return LighterFirst(lo1, lo2);
              case StalenessKind::kFreshest:
                return LighterFirst(a, b);
              case StalenessKind::kBatchBoundary: {
                const std::uint64_t when =
                    BoundaryTime(w.steps(), s.staleness.batch);
                return LighterFirst(w.LoadAt(i1, a, when),
                                    w.LoadAt(i2, b, when));
              }
              case StalenessKind::kRandomInWindow: {
                if (i1 == i2) return 1.0;
                // Independent uniform estimates on [lo1, a] and [lo2, b].
                const double w1 = static_cast<double>(a - lo1 + 1);
                const double w2 = static_cast<double>(b - lo2 + 1);
                double total = 0.0;
                for (std::uint64_t e = lo1; e <= a; ++e) {
                  double above = 0.0;  // e2 > e
                  if (e < lo2) {
                    above = w2;
                  } else if (e < b) {
                    above = static_cast<double>(b - e);
                  }
                  const double equal = (e >= lo2 && e <= b) ? 1.0 : 0.0;
                  total += above + 0.5 * equal;
                }
                return total / (w1 * w2);
              }
              case StalenessKind::kCustom:
                break;
            }
            throw ContractViolation(
                "custom staleness strategies have no analytic decision rule");
          },
      },
      spec);
}

std::size_t step(const ProcessSpec& spec, const LoadState& state,
                 ProcessAux& aux, Rng& rng) {
  CheckAux(spec, state, aux);
  const std::uint64_t n = state.n();
  if (std::holds_alternative<OneChoice>(spec)) return rng.UniformIndex(n);
  const std::size_t i1 = rng.UniformIndex(n);
  const std::size_t i2 = rng.UniformIndex(n);
  if (i1 == i2) return i1;
  const std::uint64_t a = state.load(i1);
  const std::uint64_t b = state.load(i2);
  return std::visit(
      Overloaded{
          [&](const SigmaNoisyLoad& s) -> std::size_t {
            if (s.mode == SigmaMode::kGaussianEstimates) {
              const double e1 = static_cast<double>(a) + s.sigma * rng.Normal();
              const double e2 = static_cast<double>(b) + s.sigma * rng.Normal();
              return e2 < e1 ? i2 : i1;
            }
            return Pick(i1, i2, first_choice_probability(spec, state, aux, i1, i2),
                        rng);
          },
          [&](const GAdvComp& s) -> std::size_t {
            return Pick(i1, i2,
                        AdvFirst(s, state, i1, i2, &aux.adversary_violations),
                        rng);
          },
          [&](const TauDelay& s) -> std::size_t {
            const std::uint64_t e1 = Estimate(s, *aux.window, state, i1, rng);
            const std::uint64_t e2 = Estimate(s, *aux.window, state, i2, rng);
            return Pick(i1, i2, LighterFirst(e1, e2), rng);
          },
          [&](const auto&) -> std::size_t {
            return Pick(i1, i2, first_choice_probability(spec, state, aux, i1, i2),
                        rng);
          },
      },
      spec);
}

void commit(const ProcessSpec& spec, LoadState& state, ProcessAux& aux,
            std::size_t bin) {
  CheckAux(spec, state, aux);
  state.Allocate(bin);
  CommitAux(spec, state, aux, bin);
}

Process::Process(ProcessSpec spec, const LoadState& initial)
    : spec_(std::move(spec)) {
  validate(spec_);
  aux_ = make_aux(spec_, initial);
  if (const auto* nc = std::get_if<NoisyComp>(&spec_)) rho_ = nc->rho;
  if (const auto* sn = std::get_if<SigmaNoisyLoad>(&spec_)) {
    rho_ = RhoFunction::Sigma(sn->sigma);
  }
}

std::size_t Process::Step(const LoadState& state, Rng& rng) {
  return step(spec_, state, aux_, rng);
}

void Process::Commit(LoadState& state, std::size_t bin) {
  commit(spec_, state, aux_, bin);
}

void Process::Advance(LoadState& state, Rng& rng, std::uint64_t count) {
  CheckAux(spec_, state, aux_);
  const std::uint64_t n = state.n();
  const std::uint64_t* x = state.loads().data();

  // Two-sample loop: `decide(i1, i2)` returns the chosen bin for i1 != i2.
  auto two_sample = [&](auto&& decide) {
    for (std::uint64_t k = 0; k < count; ++k) {
      const std::size_t i1 = rng.UniformIndex(n);
      const std::size_t i2 = rng.UniformIndex(n);
      state.AllocateUnchecked(i1 == i2 ? i1 : decide(i1, i2));
    }
  };

  std::visit(
      Overloaded{
          [&](const OneChoice&) {
            for (std::uint64_t k = 0; k < count; ++k) {
              state.AllocateUnchecked(rng.UniformIndex(n));
            }
          },
          [&](const TwoChoice& s) {
            two_sample([&](std::size_t i1, std::size_t i2) {
              return Pick(i1, i2, TwoChoiceFirst(s, x[i1], x[i2], i1, i2), rng);
            });
          },
          [&](const OnePlusBeta& s) {
            const double rho = 0.5 + 0.5 * s.beta;
            two_sample([&](std::size_t i1, std::size_t i2) {
              return Pick(i1, i2, RhoFirst(x[i1], x[i2], rho), rng);
            });
          },
          [&](const GBounded& s) {
            const std::uint64_t g = s.g;
            two_sample([&](std::size_t i1, std::size_t i2) {
              return Pick(i1, i2, GBoundedFirst(g, x[i1], x[i2]), rng);
            });
          },
          [&](const GMyopicComp& s) {
            const std::uint64_t g = s.g;
            two_sample([&](std::size_t i1, std::size_t i2) {
              return Pick(i1, i2, GMyopicFirst(g, x[i1], x[i2]), rng);
            });
          },
          [&](const NoisyComp&) {
            two_sample([&](std::size_t i1, std::size_t i2) {
              const auto a = x[i1];
              const auto b = x[i2];
              return Pick(i1, i2, RhoFirst(a, b, rho_(AbsDiff(a, b))), rng);
            });
          },
          [&](const SigmaNoisyLoad& s) {
            if (s.mode == SigmaMode::kGaussianEstimates) {
              const double sigma = s.sigma;
              two_sample([&](std::size_t i1, std::size_t i2) {
                const double e1 =
                    static_cast<double>(x[i1]) + sigma * rng.Normal();
                const double e2 =
                    static_cast<double>(x[i2]) + sigma * rng.Normal();
                return e2 < e1 ? i2 : i1;
              });
              return;
            }
            two_sample([&](std::size_t i1, std::size_t i2) {
              const auto a = x[i1];
              const auto b = x[i2];
              return Pick(i1, i2, RhoFirst(a, b, rho_(AbsDiff(a, b))), rng);
            });
          },
          [&](const GAdvComp& s) {
            two_sample([&](std::size_t i1, std::size_t i2) {
              return Pick(
                  i1, i2,
                  AdvFirst(s, state, i1, i2, &aux_.adversary_violations), rng);
            });
          },
          [&](const BBatch& s) {
            BatchSnapshot& snap = *aux_.batch;
            const std::uint64_t* y = snap.loads.data();
            for (std::uint64_t k = 0; k < count; ++k) {
              const std::size_t i1 = rng.UniformIndex(n);
              const std::size_t i2 = rng.UniformIndex(n);
              const std::size_t bin =
                  i1 == i2 ? i1 : Pick(i1, i2, LighterFirst(y[i1], y[i2]), rng);
              state.AllocateUnchecked(bin);
              if (!snap.is_touched[bin]) {
                snap.is_touched[bin] = 1;
                snap.touched.push_back(bin);
              }
              if (state.t() % s.b == 0) RefreshSnapshot(snap, state);
            }
          },
          [&](const TauDelay& s) {
            DelayWindow& w = *aux_.window;
            for (std::uint64_t k = 0; k < count; ++k) {
              const std::size_t i1 = rng.UniformIndex(n);
              const std::size_t i2 = rng.UniformIndex(n);
              std::size_t bin = i1;
              if (i1 != i2) {
                const std::uint64_t e1 = Estimate(s, w, state, i1, rng);
                const std::uint64_t e2 = Estimate(s, w, state, i2, rng);
                bin = Pick(i1, i2, LighterFirst(e1, e2), rng);
              }
              state.AllocateUnchecked(bin);
              w.Record(bin);
            }
          },
      },
      spec_);
}

}  // namespace nba
