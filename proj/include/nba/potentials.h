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

#ifndef NBA_POTENTIALS_H_
#define NBA_POTENTIALS_H_

#include <cstddef>
#include <string>
#include <variant>

#include "nba/load_state.h"

namespace nba {

// Sum of e^{gamma y} + e^{-gamma y}.
struct GammaPotential {
  double gamma = 0.0;
};

// Sum of e^{alpha (y - offset)^+} + e^{alpha (-y - offset)^+}.
struct LambdaPotential {
  double alpha = 0.0;
  double offset = 0.0;
};

// Sum of |y|.
struct AbsoluteValuePotential {};

// Sum of y^2.
struct QuadraticPotential {};

// Same shape as Lambda with smoothing alpha1.
struct VPotential {
  double alpha1 = 0.0;
  double offset = 0.0;
};

// Sum of e^{phi (y - z)^+}; z is a positive integer.
struct SuperExpPotential {
  double phi = 0.0;
  double z = 1.0;
};

using PotentialSpec =
    std::variant<GammaPotential, LambdaPotential, AbsoluteValuePotential,
                 QuadraticPotential, VPotential, SuperExpPotential>;

// Largest exponent evaluated before an EvaluationError is raised.
inline constexpr double kMaxExponent = 700.0;

// Config name, e.g. "gamma".
std::string potential_name(const PotentialSpec& spec);

// Throws ParameterError if a field is outside its domain for n bins.
void validate(const PotentialSpec& spec, std::size_t n);

// Contribution of one normalized load.
double potential_term(const PotentialSpec& spec, double y);

// potential_term(spec, after) - potential_term(spec, before), computed with
// expm1 so that small differences of large terms keep their precision.
double term_difference(const PotentialSpec& spec, double after, double before);

double eval(const PotentialSpec& spec, const NormalizedView& view);

// Same value without building a sorted view. O(n).
double eval_loads(const PotentialSpec& spec, const LoadState& state);

}  // namespace nba

#endif  // NBA_POTENTIALS_H_
