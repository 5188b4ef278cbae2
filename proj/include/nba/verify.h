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

#ifndef NBA_VERIFY_H_
#define NBA_VERIFY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nba {

enum class DropSuite {
  kSuperExp,            // (a) E[Phi'] <= Phi (1 - 1/n) + 2 under K
  kLambdaGood,          // (b) E[Lambda'] <= Lambda (1 - 2 alpha eps/n) + 18 alpha
  kLambdaAny,           // (c) E[Lambda'] <= Lambda (1 + 3 alpha/n)
  kQuadratic,           // (d) E[dUpsilon] <= -Delta/n + 2g + 1
  kGamma,               // E[dGamma] <= h(y) + sum q f(y)
  kTwoChoiceQuadratic,  // E[dUpsilon] <= -Delta/n + 1 for two-choice
};

std::string suite_name(DropSuite suite);
// Accepts the names returned by suite_name plus the letters a-d.
// Throws ConfigError for unknown names.
DropSuite parse_suite(const std::string& name);
std::vector<DropSuite> default_suites();

struct ViolationRecord {
  std::uint64_t trial = 0;
  std::vector<double> y;
  std::vector<double> q;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string note;
  // Rank pair (heavier, lighter) along which mass was moved illegally.
  std::optional<std::pair<std::size_t, std::size_t>> offending_pair;
};

struct SuiteReport {
  std::string suite;
  bool negative_control = false;
  std::uint64_t trials = 0;
  std::uint64_t applicable = 0;  // trials whose hypotheses held
  std::uint64_t violations = 0;
  double worst_margin = 0.0;  // min over applicable trials of rhs - lhs
  std::vector<ViolationRecord> records;
};

struct VerifyOptions {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  // Replace conforming vectors by corrupted ones; every suite must then
  // report violations.
  bool negative_control = false;
  std::size_t max_records = 5;
};

// Relative slack allowed for floating-point rounding in lhs <= rhs.
inline constexpr double kVerifyRelTol = 1e-12;

SuiteReport run_suite(DropSuite suite, const VerifyOptions& options);

std::vector<SuiteReport> verify_drop_inequalities(
    const std::vector<DropSuite>& suites, const VerifyOptions& options);

}  // namespace nba

#endif  // NBA_VERIFY_H_
