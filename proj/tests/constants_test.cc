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


#include "nba/constants.h"

#include <cmath>
#include <cstdint>

#include <gtest/gtest.h>

#include "nba/errors.h"
#include "nba/rng.h"

namespace nba {
namespace {

void ExpectRel(double actual, double expected, double tol = 1e-12) {
  EXPECT_NEAR(actual, expected, std::abs(expected) * tol);
}

TEST(ConstantsTest, FixedFields) {
  for (std::uint64_t g : {1ULL, 4ULL, 1000ULL}) {
    for (std::uint64_t n : {2ULL, 100000ULL}) {
      const ConstantsLedger l = constants(g, n);
      EXPECT_EQ(l.D, 365.0);
      EXPECT_EQ(l.c, 216.0);
      EXPECT_EQ(l.c4, 730.0);
      EXPECT_EQ(l.eps, 1.0 / 12.0);
      EXPECT_EQ(l.r, 72.0 / 73.0);
      EXPECT_EQ(l.alpha, 1.0 / 18.0);
    }
  }
}

TEST(ConstantsTest, GammaValues) {
  EXPECT_NEAR(gamma_base(), 0.0026075634070808673, 1e-18);
  EXPECT_NEAR(constants(1, 10).gamma, 0.0026075634070808673, 1e-18);
  for (std::uint64_t g = 1; g <= 1000; ++g) {
    EXPECT_NEAR(constants(g, 10).gamma * static_cast<double>(g), gamma_base(),
                1e-15);
  }
}

TEST(ConstantsTest, DerivedValues) {
  ExpectRel(u_hat(1.0 / 18.0), 307.91996056915598);
  const ConstantsLedger l = constants(4, 100000);
  ExpectRel(l.u_hat, 307.91996056915598);
  ExpectRel(l.c3, 6135.9965232491846);
  ExpectRel(l.c_s, 165971405.25802147);
  EXPECT_EQ(l.c_r, 1065800.0);
  ExpectRel(l.kappa, 2180864265856.4022);
  ExpectRel(l.alpha1, 7.6422301596664679e-14);
  ExpectRel(l.alpha2, 9.0978930472219856e-16);
  ExpectRel(l.c_tilde_s, 2.3618899089913962e33);
  ExpectRel(l.c5, 9.1274018085006511e49);
  ExpectRel(l.c6, 3.8229749260303911e-37);
  ExpectRel(l.C, 433.00000000006603);
  ExpectRel(l.Delta_s, 2.5108127733202874e18);
}

TEST(ConstantsTest, UnspecifiedEntriesAreFlagged) {
  int unspecified = 0;
  for (const auto& e : constants(2, 100).Entries()) {
    if (!e.specified) ++unspecified;
    EXPECT_FALSE(e.formula.empty()) << e.name;
  }
  EXPECT_EQ(unspecified, 3);
}

TEST(ConstantsTest, BadParameters) {
  EXPECT_THROW(constants(0, 100), ParameterError);
  EXPECT_THROW(constants(1, 1), ParameterError);
}

TEST(ConstantsTest, LayerCountExample) {
  const double alpha1 = constants(1, 2).alpha1;
  const LayerPlan plan = layer_plan(2.0, 100.0 / alpha1);
  EXPECT_EQ(plan.k, 7);
  EXPECT_EQ(plan.z.size(), 8u);
  EXPECT_EQ(plan.phi.size(), 7u);
  EXPECT_EQ(plan.psi.size(), 7u);
  EXPECT_EQ(plan.z[0], constants(1, 2).c5 * 2.0);
  // Layer steps are tiny next to c5 g, so the offsets only need to be
  // non-decreasing in double precision.
  for (std::size_t j = 1; j < plan.z.size(); ++j) {
    EXPECT_GE(plan.z[j], plan.z[j - 1]);
  }
}

TEST(ConstantsTest, LayerCountThreeRegime) {
  // g = (log n)^{5/12} gives k = 3 once alpha1 log n is large enough.
  const double alpha1 = constants(1, 2).alpha1;
  for (double log_n : {1e90, 1e120, 1e200}) {
    const LayerPlan plan = layer_plan(std::pow(log_n, 5.0 / 12.0), log_n);
    EXPECT_EQ(plan.k, 3) << log_n << " " << alpha1;
  }
}

TEST(ConstantsTest, LayerCountSatisfiesDefinition) {
  const double alpha1 = constants(1, 2).alpha1;
  Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    const double a = std::exp(0.2 + rng.UniformDouble() * 60.0);
    const double g = std::exp(std::log(a) * (0.001 + 0.998 * rng.UniformDouble()));
    const LayerPlan plan = layer_plan(g, a / alpha1);
    const double a1 = alpha1 * plan.log_n;
    ASSERT_GE(plan.k, 2);
    EXPECT_LE(std::pow(a1, 1.0 / plan.k), g);
    EXPECT_LT(g, std::pow(a1, 1.0 / (plan.k - 1)));
  }
}

TEST(ConstantsTest, LayerPlanOutOfRange) {
  EXPECT_THROW(layer_plan(4.0, std::log(1e5)), RangeError);
  EXPECT_THROW(layer_plan(1.0, 1e20), RangeError);
}

TEST(ConstantsTest, EllLowerBound) {
  const EllBound e = ell_lower_bound(2.0, 64.0);
  EXPECT_EQ(e.ell, 3);
  EXPECT_FALSE(e.in_range);
  EXPECT_FALSE(ell_lower_bound(10.0, std::log(1e5)).in_range);
  EXPECT_TRUE(ell_lower_bound(10.0, 1000.0).in_range);
  EXPECT_THROW(ell_lower_bound(1.0, 64.0), ParameterError);
}

}  // namespace
}  // namespace nba
