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

#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "nba/errors.h"

namespace nba {
namespace {

TEST(EnumerateTest, TwoChoiceTwoBinsTwoBalls) {
  const ExactDistribution d = enumerate_exact(TwoChoice{}, 2, 2);
  // Gap 0 unless both samples hit the bin holding the first ball.
  const ScaledGapPmf expected = {{0, 0.75}, {2, 0.25}};
  ASSERT_EQ(d.gap_pmf.size(), 2u);
  EXPECT_NEAR(d.gap_pmf.at(0), 0.75, 1e-15);
  EXPECT_NEAR(d.gap_pmf.at(2), 0.25, 1e-15);
  const ScaledGapPmf mc = monte_carlo_gap_pmf(TwoChoice{}, 2, 2, 200000, 1);
  EXPECT_LT(total_variation(mc, expected), 0.005);
}

TEST(EnumerateTest, OneChoiceThreeBinsTwoBalls) {
  const ExactDistribution d = enumerate_exact(OneChoice{}, 3, 2);
  EXPECT_NEAR(d.gap_pmf.at(1), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(d.gap_pmf.at(4), 1.0 / 3.0, 1e-15);
}

TEST(EnumerateTest, ExpectedQuadraticOfOneChoice) {
  // E[sum y^2] after t one-choice balls is t (1 - 1/n).
  const ExactDistribution d =
      enumerate_exact(OneChoice{}, 3, 5, {QuadraticPotential{}});
  ASSERT_EQ(d.expected_potentials.size(), 6u);
  for (std::size_t t = 0; t <= 5; ++t) {
    EXPECT_NEAR(d.expected_potentials[t][0], t * (2.0 / 3.0), 1e-12);
  }
}

TEST(EnumerateTest, PmfSumsToOne) {
  const std::vector<ProcessSpec> specs = {
      OneChoice{}, TwoChoice{}, GMyopicComp{1}, GBounded{1},
      NoisyComp{RhoFunction::Constant(0.75)}, BBatch{2},
      TauDelay{3, StalenessStrategy::RandomInWindow()}};
  for (const auto& spec : specs) {
    const ExactDistribution d = enumerate_exact(spec, 3, 4);
    double total = 0.0;
    for (const auto& [k, p] : d.gap_pmf) total += p;
    EXPECT_NEAR(total, 1.0, 1e-14) << process_name(spec);
    EXPECT_GT(d.peak_states, 0u);
  }
}

TEST(EnumerateTest, MyopicDominatesTwoChoice) {
  const ExactDistribution two = enumerate_exact(TwoChoice{}, 3, 3);
  const ExactDistribution myopic = enumerate_exact(GMyopicComp{1}, 3, 3);
  EXPECT_TRUE(cdf_dominates(two.gap_pmf, myopic.gap_pmf));
  EXPECT_FALSE(cdf_dominates(myopic.gap_pmf, two.gap_pmf));
}

TEST(EnumerateTest, MonteCarloMatchesExact) {
  const std::vector<ProcessSpec> specs = {
      GMyopicComp{1}, GBounded{1}, NoisyComp{RhoFunction::Constant(0.75)}};
  for (const auto& spec : specs) {
    const ExactDistribution d = enumerate_exact(spec, 3, 4);
    const ScaledGapPmf mc = monte_carlo_gap_pmf(spec, 3, 4, 200000, 2);
    EXPECT_LT(total_variation(mc, d.gap_pmf), 0.005) << process_name(spec);
  }
}

TEST(EnumerateTest, WorkGuard) {
  EXPECT_THROW(enumerate_exact(TwoChoice{}, 8, 30, {}, 1000), SizeError);
}

TEST(EnumerateTest, TotalVariation) {
  const ScaledGapPmf a = {{0, 0.5}, {1, 0.5}};
  const ScaledGapPmf b = {{1, 0.5}, {2, 0.5}};
  EXPECT_DOUBLE_EQ(total_variation(a, a), 0.0);
  EXPECT_DOUBLE_EQ(total_variation(a, b), 0.5);
}

}  // namespace
}  // namespace nba
