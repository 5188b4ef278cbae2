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
#include <sstream>
#include <string>

#include "nba/errors.h"

namespace nba {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double Pos(double v) { return v > 0.0 ? v : 0.0; }

double CheckedExp(double e, double y) {
  if (e > kMaxExponent) {
    std::ostringstream msg;
    msg << "potential exponent " << e << " exceeds " << kMaxExponent
        << " at normalized load y=" << y;
    throw EvaluationError(msg.str());
  }
  return std::exp(e);
}

// e^{ea} - e^{eb}.
double ExpDiff(double ea, double eb, double y) {
  if (ea > kMaxExponent || eb > kMaxExponent) CheckedExp(std::max(ea, eb), y);
  if (ea == eb) return 0.0;
  return std::exp(eb) * std::expm1(ea - eb);
}

// Exponents of the (up to two) exponential components of a term.
struct Exponents {
  double e1 = 0.0;
  double e2 = 0.0;
  int count = 0;
};

Exponents ExponentsOf(const PotentialSpec& spec, double y) {
  return std::visit(
      Overloaded{
          [&](const GammaPotential& p) {
            return Exponents{p.gamma * y, -p.gamma * y, 2};
          },
          [&](const LambdaPotential& p) {
            return Exponents{p.alpha * Pos(y - p.offset),
                             p.alpha * Pos(-y - p.offset), 2};
          },
          [&](const VPotential& p) {
            return Exponents{p.alpha1 * Pos(y - p.offset),
                             p.alpha1 * Pos(-y - p.offset), 2};
          },
          [&](const SuperExpPotential& p) {
            return Exponents{p.phi * Pos(y - p.z), 0.0, 1};
          },
          [&](const auto&) { return Exponents{}; },
      },
      spec);
}

}  // namespace

std::string potential_name(const PotentialSpec& spec) {
  return std::visit(
      Overloaded{
          [](const GammaPotential&) { return std::string("gamma"); },
          [](const LambdaPotential&) { return std::string("lambda"); },
          [](const AbsoluteValuePotential&) {
            return std::string("absolute_value");
          },
          [](const QuadraticPotential&) { return std::string("quadratic"); },
          [](const VPotential&) { return std::string("v"); },
          [](const SuperExpPotential&) { return std::string("super_exp"); },
      },
      spec);
}

void validate(const PotentialSpec& spec, std::size_t n) {
  std::visit(
      Overloaded{
          [](const GammaPotential& p) {
            if (!(p.gamma > 0.0 && p.gamma < 1.0)) {
              throw ParameterError("gamma potential: gamma must be in (0,1)");
            }
          },
          [](const LambdaPotential& p) {
            if (!(p.alpha > 0.0 && p.alpha <= 0.5)) {
              throw ParameterError("lambda potential: alpha must be in (0,1/2]");
            }
            if (!(p.offset >= 0.0)) {
              throw ParameterError("lambda potential: offset must be >= 0");
            }
          },
          [](const VPotential& p) {
            if (!(p.alpha1 > 0.0)) {
              throw ParameterError("v potential: alpha1 must be > 0");
            }
            if (!(p.offset >= 0.0)) {
              throw ParameterError("v potential: offset must be >= 0");
            }
          },
          [n](const SuperExpPotential& p) {
            if (!(p.phi > 0.0 && p.phi <= static_cast<double>(n))) {
              throw ParameterError("super_exp potential: phi must be in (0,n]");
            }
            if (!(p.z >= 1.0) || p.z != std::floor(p.z)) {
              throw ParameterError(
                  "super_exp potential: z must be a positive integer");
            }
          },
          [](const auto&) {},
      },
      spec);
}

double potential_term(const PotentialSpec& spec, double y) {
  if (std::holds_alternative<AbsoluteValuePotential>(spec)) return std::abs(y);
  if (std::holds_alternative<QuadraticPotential>(spec)) return y * y;
  const Exponents e = ExponentsOf(spec, y);
  double v = CheckedExp(e.e1, y);
  if (e.count == 2) v += CheckedExp(e.e2, y);
  return v;
}

double term_difference(const PotentialSpec& spec, double after,
                       double before) {
  if (std::holds_alternative<AbsoluteValuePotential>(spec)) {
    return std::abs(after) - std::abs(before);
  }
  if (std::holds_alternative<QuadraticPotential>(spec)) {
    return (after - before) * (after + before);
  }
  const Exponents a = ExponentsOf(spec, after);
  const Exponents b = ExponentsOf(spec, before);
  double d = ExpDiff(a.e1, b.e1, after);
  if (a.count == 2) d += ExpDiff(a.e2, b.e2, after);
  return d;
}

double eval(const PotentialSpec& spec, const NormalizedView& view) {
  double sum = 0.0;
  for (double y : view.y) sum += potential_term(spec, y);
  return sum;
}

double eval_loads(const PotentialSpec& spec, const LoadState& state) {
  const double avg =
      static_cast<double>(state.t()) / static_cast<double>(state.n());
  double sum = 0.0;
  for (std::uint64_t x : state.loads()) {
    sum += potential_term(spec, static_cast<double>(x) - avg);
  }
  return sum;
}

}  // namespace nba
