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


#include "nba/potentials.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "nba/errors.h"
#include "nba/load_state.h"
#include "nba/rng.h"

namespace nba {
namespace {

double EvalLoads(const PotentialSpec& spec, std::vector<std::uint64_t> x) {
  return eval(spec, normalized(LoadState::FromLoads(std::move(x))));
}

TEST(PotentialsTest, GammaExample) {
  // y = [1, 0, -1], gamma = 1/2.
  EXPECT_NEAR(EvalLoads(GammaPotential{0.5}, {2, 0, 1}), 6.510503860825523,
              1e-14);
}

TEST(PotentialsTest, SuperExpExample) {
  // y = [3, 0, -3], phi = 4, z = 2.
  EXPECT_NEAR(EvalLoads(SuperExpPotential{4.0, 2.0}, {6, 3, 0}),
              56.598150033144239, 1e-12);
}

TEST(PotentialsTest, QuadraticAndAbsoluteValue) {
  EXPECT_DOUBLE_EQ(EvalLoads(QuadraticPotential{}, {2, 0, 1}), 2.0);
  EXPECT_DOUBLE_EQ(EvalLoads(AbsoluteValuePotential{}, {2, 0, 1}), 2.0);
  EXPECT_DOUBLE_EQ(EvalLoads(QuadraticPotential{}, {3, 3, 3}), 0.0);
}

TEST(PotentialsTest, LambdaUsesPositivePartAboveOffset) {
  const LambdaPotential lam{0.5, 2.0};
  EXPECT_NEAR(potential_term(lam, 5.0), 5.481689070338065, 1e-14);
  EXPECT_NEAR(potential_term(lam, -5.0), 5.481689070338065, 1e-14);
  EXPECT_EQ(potential_term(lam, 1.5), 2.0);
  const VPotential v{0.5, 2.0};
  EXPECT_EQ(potential_term(v, 5.0), potential_term(lam, 5.0));
}

TEST(PotentialsTest, TermDifferenceKeepsPrecision) {
  const GammaPotential gam{0.999};
  const double exact = std::exp(0.999 * 20.125) + std::exp(-0.999 * 20.125) -
                       std::exp(0.999 * 20.0) - std::exp(-0.999 * 20.0);
  EXPECT_NEAR(term_difference(gam, 20.125, 20.0), exact,
              std::abs(exact) * 1e-13);
  // A tiny move on a large term: relative precision must survive.
  const LambdaPotential lam{1e-3, 0.0};
  EXPECT_NEAR(term_difference(lam, 1.0, 0.0), 0.0010005001667083417,
              1e-18);
}

TEST(PotentialsTest, TermDifferenceMatchesTermsOnRandomInputs) {
  Rng rng(4);
  const std::vector<PotentialSpec> specs = {
      GammaPotential{0.1},       LambdaPotential{0.25, 3.0},
      AbsoluteValuePotential{},  QuadraticPotential{},
      VPotential{0.01, 1.0},     SuperExpPotential{2.0, 3.0}};
  for (const auto& spec : specs) {
    for (int i = 0; i < 500; ++i) {
      const double a = rng.UniformDouble() * 20 - 10;
      const double b = a + (rng.UniformDouble() * 2 - 1);
      const double direct = potential_term(spec, b) - potential_term(spec, a);
      const double scale =
          std::max({1.0, potential_term(spec, a), potential_term(spec, b)});
      EXPECT_NEAR(term_difference(spec, b, a), direct, 1e-12 * scale);
    }
  }
}

TEST(PotentialsTest, OverflowIsEvaluationError) {
  EXPECT_THROW(potential_term(GammaPotential{0.9}, 1000.0), EvaluationError);
  EXPECT_THROW(EvalLoads(SuperExpPotential{8.0, 1.0}, {200, 0}),
               EvaluationError);
}

TEST(PotentialsTest, Validation) {
  EXPECT_NO_THROW(validate(GammaPotential{0.1}, 10));
  EXPECT_THROW(validate(GammaPotential{0.0}, 10), ParameterError);
  EXPECT_THROW(validate(LambdaPotential{0.6, 0.0}, 10), ParameterError);
  EXPECT_THROW(validate(LambdaPotential{0.1, -1.0}, 10), ParameterError);
  EXPECT_THROW(validate(SuperExpPotential{1.0, 1.5}, 10), ParameterError);
  EXPECT_THROW(validate(SuperExpPotential{11.0, 1.0}, 10), ParameterError);
  EXPECT_THROW(validate(VPotential{0.0, 1.0}, 10), ParameterError);
}

TEST(PotentialsTest, SymmetricPotentialsAreMinimalWhenBalanced) {
  Rng rng(2);
  const GammaPotential gam{0.2};
  const double balanced = EvalLoads(gam, {4, 4, 4, 4});
  EXPECT_DOUBLE_EQ(balanced, 8.0);
  for (int i = 0; i < 100; ++i) {
    std::vector<std::uint64_t> x(4);
    for (auto& v : x) v = rng.UniformIndex(10);
    EXPECT_GE(EvalLoads(gam, x), balanced - 1e-12);
    EXPECT_GE(EvalLoads(QuadraticPotential{}, x), 0.0);
  }
}

TEST(PotentialsTest, Names) {
  EXPECT_EQ(potential_name(GammaPotential{}), "gamma");
  EXPECT_EQ(potential_name(LambdaPotential{}), "lambda");
  EXPECT_EQ(potential_name(AbsoluteValuePotential{}), "absolute_value");
  EXPECT_EQ(potential_name(QuadraticPotential{}), "quadratic");
  EXPECT_EQ(potential_name(VPotential{}), "v");
  EXPECT_EQ(potential_name(SuperExpPotential{}), "super_exp");
}

}  // namespace
}  // namespace nba
