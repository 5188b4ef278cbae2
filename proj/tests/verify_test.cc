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

#include <string>

#include <gtest/gtest.h>

#include "nba/errors.h"

namespace nba {
namespace {

TEST(VerifyTest, SuiteNames) {
  EXPECT_EQ(parse_suite("a"), DropSuite::kSuperExp);
  EXPECT_EQ(parse_suite("b"), DropSuite::kLambdaGood);
  EXPECT_EQ(parse_suite("c"), DropSuite::kLambdaAny);
  EXPECT_EQ(parse_suite("d"), DropSuite::kQuadratic);
  for (DropSuite s : default_suites()) EXPECT_EQ(parse_suite(suite_name(s)), s);
  EXPECT_EQ(default_suites().size(), 6u);
  EXPECT_THROW(parse_suite("zzz"), ConfigError);
}

TEST(VerifyTest, SuitesHoldOnSmallRun) {
  VerifyOptions opt;
  opt.trials = 500;
  opt.seed = 3;
  for (const auto& rep : verify_drop_inequalities(default_suites(), opt)) {
    EXPECT_EQ(rep.violations, 0u) << rep.suite;
    EXPECT_GT(rep.applicable, 0u) << rep.suite;
    EXPECT_GE(rep.worst_margin, 0.0) << rep.suite;
    EXPECT_TRUE(rep.records.empty()) << rep.suite;
  }
}

TEST(VerifyTest, NegativeControlsFail) {
  VerifyOptions opt;
  opt.trials = 100;
  opt.negative_control = true;
  for (const auto& rep : verify_drop_inequalities(default_suites(), opt)) {
    EXPECT_TRUE(rep.negative_control);
    EXPECT_GT(rep.violations, 0u) << rep.suite;
    ASSERT_FALSE(rep.records.empty()) << rep.suite;
    EXPECT_LE(rep.records.size(), opt.max_records);
    EXPECT_GT(rep.records[0].lhs, rep.records[0].rhs);
  }
}

TEST(VerifyTest, DeterministicReports) {
  VerifyOptions opt;
  opt.trials = 200;
  const SuiteReport a = run_suite(DropSuite::kLambdaAny, opt);
  const SuiteReport b = run_suite(DropSuite::kLambdaAny, opt);
  EXPECT_EQ(a.applicable, b.applicable);
  EXPECT_EQ(a.worst_margin, b.worst_margin);
}

TEST(VerifyTest, ZeroTrialsIsConfigError) {
  VerifyOptions opt;
  opt.trials = 0;
  EXPECT_THROW(run_suite(DropSuite::kQuadratic, opt), ConfigError);
}

}  // namespace
}  // namespace nba
