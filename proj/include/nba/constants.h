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

#ifndef NBA_CONSTANTS_H_
#define NBA_CONSTANTS_H_

#include <cstdint>
#include <string>
#include <vector>

namespace nba {

// One named ledger value with the formula it was computed from.
struct LedgerEntry {
  std::string name;
  double value = 0.0;
  std::string formula;
  bool specified = true;  // false for constants that have no numeric value
};

// Constants of the upper-bound analysis for given (g, n). These are proof
// constants; they are not predictions of empirical gaps.
struct ConstantsLedger {
  std::uint64_t g = 1;
  std::uint64_t n = 2;

  double gamma = 0;
  double alpha = 0;
  double D = 0;
  double c4 = 0;
  double eps = 0;
  double r = 0;
  double c = 0;
  double c3 = 0;
  double u_hat = 0;
  double c_s = 0;
  double c_r = 0;
  double kappa = 0;
  double Delta_s = 0;
  double Delta_r = 0;
  double alpha1 = 0;
  double alpha2 = 0;
  double c_tilde_s = 0;
  double Delta_tilde_s = 0;
  double c6 = 0;
  double c5 = 0;
  double C = 0;

  // All values in a fixed order, plus the unspecified c1, c2 and the
  // constant of the Gamma drift bound.
  std::vector<LedgerEntry> Entries() const;
};

// -log(1 - 1/384).
double gamma_base();

// (4/alpha) log(4/alpha).
double u_hat(double alpha);

// 4 c_hat u_hat(alpha)^2 + 4 c4^2.
double c_s(double alpha, double c4, double c_hat);

// max{2 c4^2, 2/alpha^2}.
double c_r(double alpha, double c4);

// Requires g >= 1 and n >= 2 (ParameterError otherwise).
ConstantsLedger constants(std::uint64_t g, std::uint64_t n);

// Layers of the super-exponential analysis. Index j runs over 0..k.
struct LayerPlan {
  double g = 0;
  double log_n = 0;  // natural log of n
  int k = 0;
  std::vector<double> z;    // offsets z_0..z_k
  std::vector<double> phi;  // phi_0..phi_{k-1}
  std::vector<double> psi;  // psi_0..psi_{k-1}
};

// k is the unique integer >= 2 with
//   (alpha1 log n)^{1/k} <= g < (alpha1 log n)^{1/(k-1)}.
// Requires 1 < g < alpha1 log n; throws RangeError naming the interval
// otherwise. log_n is the natural logarithm of n, which lets callers reach
// the (astronomically large) n for which the range is non-empty.
LayerPlan layer_plan(double g, double log_n);

struct EllBound {
  std::int64_t ell = 0;
  bool in_range = false;  // 10 <= g <= (1/8) ln n / ln ln n
};

// floor(log((1/8) ln n / ln g) / ln g). Throws ParameterError for g <= 1.
EllBound ell_lower_bound(double g, double log_n);

}  // namespace nba

#endif  // NBA_CONSTANTS_H_
