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
#include <sstream>

#include "nba/errors.h"

namespace nba {

double gamma_base() { return -std::log1p(-1.0 / 384.0); }

double u_hat(double alpha) { return (4.0 / alpha) * std::log(4.0 / alpha); }

double c_s(double alpha, double c4, double c_hat) {
  const double u = u_hat(alpha);
  return 4.0 * c_hat * u * u + 4.0 * c4 * c4;
}

double c_r(double alpha, double c4) {
  return std::max(2.0 * c4 * c4, 2.0 / (alpha * alpha));
}

ConstantsLedger constants(std::uint64_t g, std::uint64_t n) {
  if (g < 1) throw ParameterError("constants: g must be >= 1");
  if (n < 2) throw ParameterError("constants: n must be >= 2");
  ConstantsLedger l;
  l.g = g;
  l.n = n;
  const double gd = static_cast<double>(g);
  const double nd = static_cast<double>(n);
  const double log_n = std::log(nd);

  l.gamma = gamma_base() / gd;
  l.alpha = 1.0 / 18.0;
  l.D = 365.0;
  l.c4 = 2.0 * l.D;
  l.eps = 1.0 / 12.0;
  l.r = 72.0 / 73.0;  // 6 / (6 + eps)
  l.c = 12.0 * 18.0;
  l.c3 = 16.0 / gamma_base();
  l.u_hat = u_hat(l.alpha);
  l.c_s = c_s(l.alpha, l.c4, 2.0 * l.c);
  l.c_r = c_r(l.alpha, l.c4);
  const double aer = l.alpha * l.eps * l.r;
  l.Delta_s = (60.0 * l.c_s / aer) * nd * std::max(log_n, gd);
  l.kappa = 2.0 / l.alpha + l.c4 + 60.0 * l.c_s / aer;
  const double log_ng = std::log(nd * gd);
  l.Delta_r = (60.0 * l.c3 * l.c3 * l.c_r / aer) * nd * gd * log_ng * log_ng;
  l.alpha1 = 1.0 / (6.0 * l.kappa);
  l.alpha2 = l.alpha1 / 84.0;
  const double e2a1 = std::exp(2.0 * l.alpha1);
  l.c_tilde_s = c_s(l.alpha1, l.c4, e2a1 * l.c);
  const double log_2c = std::log(2.0 * l.c * e2a1);
  const double a1er = l.alpha1 * l.eps * l.r;
  l.Delta_tilde_s = (20.0 * l.c_tilde_s * log_2c / a1er) * nd * gd;
  l.c6 = l.r / (9.0 * 20.0 * l.c_tilde_s * log_2c);
  l.c5 = 2.0 * std::max(l.c4, std::ceil(20.0 * l.c_tilde_s * log_2c / a1er));
  l.C = 2.0 * e2a1 * l.c + 1.0;
  return l;
}

std::vector<LedgerEntry> ConstantsLedger::Entries() const {
  return {
      {"gamma", gamma, "-log(1 - 1/384) / g"},
      {"alpha", alpha, "1/18"},
      {"D", D, "365"},
      {"c4", c4, "2 * D"},
      {"eps", eps, "1/12"},
      {"r", r, "6 / (6 + eps)"},
      {"c", c, "12 * 18"},
      {"c1", 0.0, "c' + 4, c' from the Gamma drift bound (no numeric value)",
       false},
      {"c2", 0.0, "96 * c1 / (-log(1 - 1/384)) (depends on c1)", false},
      {"c_gamma_drift", 0.0,
       "constant of the Gamma drift bound (exists, no numeric value)", false},
      {"c3", c3, "16 / (-log(1 - 1/384))"},
      {"u_hat", u_hat, "(4/alpha) * log(4/alpha)"},
      {"c_s", c_s, "c_s(alpha, c4, 2c) = 4 * (2c) * u_hat^2 + 4 * c4^2"},
      {"c_r", c_r, "max{2 * c4^2, 2 / alpha^2}"},
      {"kappa", kappa, "2/alpha + c4 + 60 * c_s / (alpha * eps * r)"},
      {"Delta_s", Delta_s,
       "(60 * c_s / (alpha * eps * r)) * n * max{log n, g}"},
      {"Delta_r", Delta_r,
       "(60 * c3^2 * c_r / (alpha * eps * r)) * n * g * (log(n g))^2"},
      {"alpha1", alpha1, "1 / (6 * kappa)"},
      {"alpha2", alpha2, "alpha1 / 84"},
      {"c_tilde_s", c_tilde_s,
       "c_s(alpha1, c4, e^{2 alpha1} c), u_hat taken at alpha1"},
      {"Delta_tilde_s", Delta_tilde_s,
       "(20 * c_tilde_s * log(2 c e^{2 alpha1}) / (alpha1 * eps * r)) * n * g"},
      {"c6", c6, "r / (9 * 20 * c_tilde_s * log(2 c e^{2 alpha1}))"},
      {"c5", c5,
       "2 * max{c4, ceil(20 * c_tilde_s * log(2 c e^{2 alpha1}) / "
       "(alpha1 * eps * r))}"},
      {"C", C, "2 * e^{2 alpha1} * c + 1"},
  };
}

LayerPlan layer_plan(double g, double log_n) {
  // alpha1 does not depend on (g, n).
  const ConstantsLedger l = constants(1, 2);
  const double a1 = l.alpha1 * log_n;
  if (!(g > 1.0 && g < a1)) {
    std::ostringstream msg;
    msg << "layer_plan: no valid k; requires 1 < g < alpha1 * ln(n) = " << a1
        << " (got g=" << g << ")";
    throw RangeError(msg.str());
  }
  // (a1)^{1/k} <= g  <=>  ln(a1) / ln(g) <= k, so k is the ceiling, bumped
  // if rounding put it on the wrong side of either inequality.
  const double ratio = std::log(a1) / std::log(g);
  int k = std::max(2, static_cast<int>(std::ceil(ratio)));
  while (k > 2 && std::pow(a1, 1.0 / (k - 1)) <= g) --k;
  while (std::pow(a1, 1.0 / k) > g) ++k;

  LayerPlan plan;
  plan.g = g;
  plan.log_n = log_n;
  plan.k = k;
  const double step = std::ceil(4.0 / l.alpha2);
  for (int j = 0; j <= k; ++j) {
    plan.z.push_back(l.c5 * g + step * j * g);
  }
  plan.phi.push_back(l.alpha2);
  plan.psi.push_back(l.alpha1);
  for (int j = 1; j <= k - 1; ++j) {
    const double scale = log_n * std::pow(g, j - k);
    plan.phi.push_back(l.alpha2 * scale);
    plan.psi.push_back(l.alpha1 * scale);
  }
  return plan;
}

EllBound ell_lower_bound(double g, double log_n) {
  if (!(g > 1.0)) throw ParameterError("ell_lower_bound: g must be > 1");
  EllBound out;
  const double lg = std::log(g);
  out.ell = static_cast<std::int64_t>(
      std::floor(std::log(0.125 * log_n / lg) / lg));
  const double upper = log_n > 1.0 ? 0.125 * log_n / std::log(log_n) : 0.0;
  out.in_range = g >= 10.0 && g <= upper;
  return out;
}

}  // namespace nba
