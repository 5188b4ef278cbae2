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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "nba/errors.h"
#include "nba/load_state.h"
#include "nba/oracle.h"
#include "nba/rng.h"

namespace nba {
namespace {

double FirstProb(const ProcessSpec& spec, std::vector<std::uint64_t> x,
                 std::size_t i1, std::size_t i2) {
  LoadState s = LoadState::FromLoads(std::move(x));
  return first_choice_probability(spec, s, make_aux(spec, s), i1, i2);
}

std::vector<ProcessSpec> AllSpecs() {
  return {OneChoice{},
          TwoChoice{},
          TwoChoice{TieBreak::kLowerIndex},
          OnePlusBeta{0.4},
          GBounded{2},
          GMyopicComp{2},
          NoisyComp{RhoFunction::Constant(0.75)},
          NoisyComp{RhoFunction::Table({0.5, 0.6, 0.9}, 1.0)},
          SigmaNoisyLoad{1.5, SigmaMode::kRhoFormula},
          SigmaNoisyLoad{1.5, SigmaMode::kGaussianEstimates},
          GAdvComp{2, AdversaryStrategy::GreedyMax(), false},
          GAdvComp{2, AdversaryStrategy::CoinFlip(), true},
          BBatch{3},
          TauDelay{4, StalenessStrategy::Oldest()},
          TauDelay{4, StalenessStrategy::RandomInWindow()},
          TauDelay{4, StalenessStrategy::Freshest()}};
}

TEST(ProcessTest, TwoChoicePicksLighter) {
  EXPECT_EQ(FirstProb(TwoChoice{}, {5, 2}, 0, 1), 0.0);
  EXPECT_EQ(FirstProb(TwoChoice{}, {5, 2}, 1, 0), 1.0);
  EXPECT_EQ(FirstProb(TwoChoice{}, {3, 3}, 0, 1), 0.5);
  EXPECT_EQ(FirstProb(TwoChoice{TieBreak::kLowerIndex}, {3, 3}, 1, 0), 0.0);
}

TEST(ProcessTest, GBoundedPicksHeavierWithinG) {
  EXPECT_EQ(FirstProb(GBounded{3}, {5, 4}, 0, 1), 1.0);
  EXPECT_EQ(FirstProb(GBounded{3}, {8, 4}, 0, 1), 0.0);
  EXPECT_EQ(FirstProb(GBounded{3}, {5, 5}, 0, 1), 0.5);
}

TEST(ProcessTest, GMyopicFlipsCoinWithinG) {
  EXPECT_EQ(FirstProb(GMyopicComp{3}, {5, 4}, 0, 1), 0.5);
  EXPECT_EQ(FirstProb(GMyopicComp{3}, {5, 2}, 0, 1), 0.5);
  EXPECT_EQ(FirstProb(GMyopicComp{3}, {6, 2}, 0, 1), 0.0);
}

TEST(ProcessTest, OnePlusBetaMixesOneAndTwoChoice) {
  EXPECT_DOUBLE_EQ(FirstProb(OnePlusBeta{0.4}, {5, 2}, 0, 1), 0.3);
  EXPECT_DOUBLE_EQ(FirstProb(OnePlusBeta{1.0}, {5, 2}, 0, 1), 0.0);
}

TEST(ProcessTest, RhoSigmaValues) {
  EXPECT_EQ(rho_sigma(0.0, 2.0), 0.5);
  EXPECT_NEAR(rho_sigma(1.0, 1.0), 0.8160602794142788, 1e-15);
  EXPECT_GT(rho_sigma(100.0, 1.0), 1.0 - 1e-12);
  RhoFunction rho = RhoFunction::Sigma(3.0);
  for (std::uint64_t d = 0; d < 40; ++d) {
    EXPECT_NEAR(rho(d), rho_sigma(static_cast<double>(d), 3.0), 1e-15);
  }
}

TEST(ProcessTest, SigmaMustBePositive) {
  EXPECT_THROW(validate(SigmaNoisyLoad{0.0}), ParameterError);
  EXPECT_THROW(validate(SigmaNoisyLoad{-1.0}), ParameterError);
  EXPECT_THROW(RhoFunction::Sigma(0.0), ParameterError);
}

TEST(ProcessTest, RhoValidation) {
  EXPECT_NO_THROW(RhoFunction::Step(3).Validate());
  EXPECT_NO_THROW(RhoFunction::Constant(0.25).Validate());
  EXPECT_THROW(RhoFunction::Table({0.9, 0.5}, 1.0).Validate(), ParameterError);
  EXPECT_THROW(RhoFunction::Table({0.5}, 1.5).Validate(), ParameterError);
  EXPECT_THROW(RhoFunction::Table({0.5, 0.7}, 0.6).Validate(), ParameterError);
}

TEST(ProcessTest, OtherParameterDomains) {
  EXPECT_THROW(validate(OnePlusBeta{0.0}), ParameterError);
  EXPECT_THROW(validate(OnePlusBeta{1.5}), ParameterError);
  EXPECT_THROW(validate(BBatch{0}), ParameterError);
  EXPECT_THROW(validate(TauDelay{0, StalenessStrategy::Oldest()}),
               ParameterError);
  EXPECT_THROW(AdversaryStrategy::FromName("bogus"), ParameterError);
  EXPECT_THROW(StalenessStrategy::FromName("bogus"), ParameterError);
}

TEST(ProcessTest, RhoStepReproducesGBounded) {
  NoisyComp step{RhoFunction::Step(3)};
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint64_t> x(6);
    for (auto& v : x) v = rng.UniformIndex(10);
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) {
        if (x[i] == x[j]) continue;
        EXPECT_EQ(FirstProb(step, x, i, j), FirstProb(GBounded{3}, x, i, j));
      }
    }
  }
}

TEST(ProcessTest, NoisyComparisonFrequency) {
  Rng rng(8);
  const RhoFunction rho = RhoFunction::Constant(0.75);
  const int draws = 100000;
  int lighter = 0;
  for (int i = 0; i < draws; ++i) lighter += decide_noisy_comparison(3, 1, rho, rng);
  const double se = std::sqrt(0.75 * 0.25 / draws);
  EXPECT_NEAR(lighter / static_cast<double>(draws), 0.75, 4 * se);
  int first = 0;
  for (int i = 0; i < draws; ++i) first += decide_noisy_comparison(2, 2, rho, rng) == 0;
  EXPECT_NEAR(first / static_cast<double>(draws), 0.5, 4 * std::sqrt(0.25 / draws));
}

TEST(ProcessTest, GaussianModeMatchesNormalCdf) {
  const double sigma = 2.0;
  SigmaNoisyLoad spec{sigma, SigmaMode::kGaussianEstimates};
  // Lighter bin wins with Phi(delta / (sqrt(2) sigma)).
  EXPECT_NEAR(FirstProb(spec, {4, 7}, 0, 1), 0.8555778168267576, 1e-15);
  EXPECT_NEAR(FirstProb(spec, {7, 4}, 0, 1), 1.0 - 0.8555778168267576, 1e-15);
  EXPECT_EQ(FirstProb(spec, {5, 5}, 0, 1), 0.5);

  // Simulated decisions agree with the closed form within 3 standard errors.
  LoadState s = LoadState::FromLoads({4, 7});
  ProcessAux aux = make_aux(spec, s);
  AllocationVector q = allocation_vector(spec, s);
  Rng rng(12);
  const int draws = 200000;
  int to_bin0 = 0;
  for (int i = 0; i < draws; ++i) to_bin0 += step(spec, s, aux, rng) == 0;
  const double p = q.ForBin(0);
  EXPECT_NEAR(to_bin0 / static_cast<double>(draws), p,
              3 * std::sqrt(p * (1 - p) / draws));
}

TEST(ProcessTest, BatchSnapshotUsesStaleLoads) {
  Rng rng(1);
  const std::vector<std::uint64_t> snapshot = {3, 1};
  EXPECT_EQ(batch_snapshot_decide(snapshot, 0, 1, rng), 1u);
  EXPECT_EQ(batch_snapshot_decide(snapshot, 1, 0, rng), 1u);

  // Current loads [3, 5] but the batch started at [3, 1].
  LoadState s = LoadState::FromLoads({3, 1});
  ProcessAux aux = make_aux(BBatch{10}, s);
  for (int i = 0; i < 4; ++i) commit(BBatch{10}, s, aux, 1);
  ASSERT_EQ(s.load(1), 5u);
  EXPECT_EQ(first_choice_probability(BBatch{10}, s, aux, 0, 1), 0.0);
}

TEST(ProcessTest, FirstBatchIsOneChoice) {
  const BBatch spec{100};
  LoadState s(5);
  ProcessAux aux = make_aux(spec, s);
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    AllocationVector q = allocation_vector(spec, s, aux);
    for (std::size_t b = 0; b < 5; ++b) EXPECT_NEAR(q.ForBin(b), 0.2, 1e-15);
    commit(spec, s, aux, step(spec, s, aux, rng));
  }
}

TEST(ProcessTest, DelayWindowCountsRecentAllocations) {
  DelayWindow w(3, 4);
  EXPECT_EQ(w.tau(), 4u);
  w.Record(2);
  w.Record(0);
  w.Record(0);
  w.Record(0);
  // Only the last tau - 1 = 3 allocations are kept.
  EXPECT_EQ(w.stored(), 3u);
  EXPECT_EQ(w.InWindow(0), 3u);
  EXPECT_EQ(w.InWindow(2), 0u);
  EXPECT_EQ(w.OldestLoad(0, 10), 7u);
  EXPECT_EQ(stale_estimate(w, 0, 10), 7u);
  EXPECT_EQ(w.LoadAt(0, 10, 4), 10u);
  EXPECT_EQ(w.LoadAt(0, 10, 3), 9u);
  EXPECT_EQ(w.Contents(), (std::vector<std::uint32_t>{0, 0, 0}));
  w.Record(1);
  EXPECT_EQ(w.Contents(), (std::vector<std::uint32_t>{0, 0, 1}));
}

TEST(ProcessTest, TauOneIsTwoChoice) {
  const TauDelay spec{1, StalenessStrategy::Oldest()};
  LoadState s = LoadState::FromLoads({4, 2, 9});
  ProcessAux aux = make_aux(spec, s);
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_EQ(first_choice_probability(spec, s, aux, i, j),
                  FirstProb(TwoChoice{}, std::vector<std::uint64_t>(
                                             s.loads().begin(), s.loads().end()),
                            i, j));
      }
    }
    commit(spec, s, aux, step(spec, s, aux, rng));
  }
}

TEST(ProcessTest, FreshestIsTwoChoiceForAnyTau) {
  const TauDelay spec{50, StalenessStrategy::Freshest()};
  LoadState s(4);
  ProcessAux aux = make_aux(spec, s);
  Rng rng(6);
  for (int t = 0; t < 200; ++t) {
    AllocationVector a = allocation_vector(spec, s, aux);
    AllocationVector b = allocation_vector(TwoChoice{}, s);
    for (std::size_t bin = 0; bin < 4; ++bin) {
      EXPECT_NEAR(a.ForBin(bin), b.ForBin(bin), 1e-15);
    }
    commit(spec, s, aux, step(spec, s, aux, rng));
  }
}

TEST(ProcessTest, BBatchEqualsTauDelayAtBatchBoundaries) {
  Rng rng(21);
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::uint64_t b : {1ULL, 2ULL, 3ULL, 5ULL}) {
      const BBatch batch{b};
      const TauDelay delay{b, StalenessStrategy::BatchBoundary(b)};
      LoadState s1(n);
      LoadState s2(n);
      ProcessAux a1 = make_aux(batch, s1);
      ProcessAux a2 = make_aux(delay, s2);
      for (int t = 0; t < 40; ++t) {
        AllocationVector q1 = allocation_vector(batch, s1, a1);
        AllocationVector q2 = allocation_vector(delay, s2, a2);
        for (std::size_t bin = 0; bin < n; ++bin) {
          ASSERT_NEAR(q1.ForBin(bin), q2.ForBin(bin), 1e-15)
              << "n=" << n << " b=" << b << " t=" << t;
        }
        const std::size_t bin = step(batch, s1, a1, rng);
        commit(batch, s1, a1, bin);
        commit(delay, s2, a2, bin);
      }
    }
  }
}

// Decisions of the specialized loop equal repeated step + commit.
TEST(ProcessTest, AdvanceMatchesStepAndCommit) {
  for (const auto& spec : AllSpecs()) {
    LoadState s1(7);
    LoadState s2(7);
    Process p1(spec, s1);
    ProcessAux aux = make_aux(spec, s2);
    Rng r1(77);
    Rng r2(77);
    p1.Advance(s1, r1, 500);
    for (int t = 0; t < 500; ++t) commit(spec, s2, aux, step(spec, s2, aux, r2));
    EXPECT_EQ(std::vector<std::uint64_t>(s1.loads().begin(), s1.loads().end()),
              std::vector<std::uint64_t>(s2.loads().begin(), s2.loads().end()))
        << process_name(spec);
  }
}

TEST(ProcessTest, GBoundedIsGreedyAdversary) {
  for (std::uint64_t g : {0ULL, 1ULL, 4ULL, 16ULL}) {
    LoadState s1(100);
    LoadState s2(100);
    Process p1(GBounded{g}, s1);
    Process p2(GAdvComp{g, AdversaryStrategy::GreedyMax(), true}, s2);
    Rng r1(5);
    Rng r2(5);
    p1.Advance(s1, r1, 20000);
    p2.Advance(s2, r2, 20000);
    EXPECT_EQ(std::vector<std::uint64_t>(s1.loads().begin(), s1.loads().end()),
              std::vector<std::uint64_t>(s2.loads().begin(), s2.loads().end()));
    EXPECT_EQ(p2.aux().adversary_violations, 0u);
  }
}

TEST(ProcessTest, GMyopicIsCoinFlipAdversary) {
  for (std::uint64_t g : {0ULL, 1ULL, 4ULL, 16ULL}) {
    LoadState s1(100);
    LoadState s2(100);
    Process p1(GMyopicComp{g}, s1);
    Process p2(GAdvComp{g, AdversaryStrategy::CoinFlip(), false}, s2);
    Rng r1(6);
    Rng r2(6);
    p1.Advance(s1, r1, 20000);
    p2.Advance(s2, r2, 20000);
    EXPECT_EQ(std::vector<std::uint64_t>(s1.loads().begin(), s1.loads().end()),
              std::vector<std::uint64_t>(s2.loads().begin(), s2.loads().end()));
  }
}

TEST(ProcessTest, AdversaryIsOverriddenOutsideWindow) {
  // Always prefers the heavier bin, even far outside the window.
  const GAdvComp spec{
      2,
      AdversaryStrategy::Scripted(
          "heavier",
          [](const AdversaryContext& c) {
            return c.loads[c.first] >= c.loads[c.second] ? 1.0 : 0.0;
          }),
      true};
  EXPECT_EQ(FirstProb(spec, {9, 1}, 0, 1), 0.0);
  EXPECT_EQ(FirstProb(spec, {3, 1}, 0, 1), 1.0);
  LoadState s = LoadState::FromLoads({9, 1});
  ProcessAux aux = make_aux(spec, s);
  Rng rng(1);
  // Only the pair (0, 0) can put a ball into the heavy bin.
  int heavy = 0;
  for (int i = 0; i < 4000; ++i) heavy += step(spec, s, aux, rng) == 0;
  EXPECT_NEAR(heavy / 4000.0, 0.25, 0.03);
  EXPECT_GT(aux.adversary_violations, 0u);
}

TEST(ProcessTest, StepFrequenciesMatchAllocationVector) {
  for (const auto& spec : AllSpecs()) {
    LoadState s = LoadState::FromLoads({6, 3, 3, 0, 5});
    ProcessAux aux = make_aux(spec, s);
    Rng warm(9);
    for (int t = 0; t < 5; ++t) commit(spec, s, aux, step(spec, s, aux, warm));
    const AllocationVector q = allocation_vector(spec, s, aux);
    Rng rng(10);
    const int draws = 100000;
    std::vector<int> counts(5, 0);
    for (int i = 0; i < draws; ++i) ++counts[step(spec, s, aux, rng)];
    for (std::size_t b = 0; b < 5; ++b) {
      const double p = q.ForBin(b);
      const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / draws);
      EXPECT_NEAR(counts[b] / static_cast<double>(draws), p, 4.5 * se)
          << process_name(spec) << " bin " << b;
    }
  }
}

TEST(ProcessTest, AuxMismatchIsContractViolation) {
  LoadState s(3);
  ProcessAux empty;
  EXPECT_THROW(first_choice_probability(BBatch{2}, s, empty, 0, 1),
               ContractViolation);
  const TauDelay custom{
      3, StalenessStrategy::Custom(
             "fixed", [](const StalenessContext&, Rng&) { return 0ULL; })};
  EXPECT_THROW(first_choice_probability(custom, s, make_aux(custom, s), 0, 1),
               ContractViolation);
}

}  // namespace
}  // namespace nba
