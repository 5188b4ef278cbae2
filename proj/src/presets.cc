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


#include "nba/presets.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "nba/errors.h"

namespace nba {
namespace {

constexpr std::uint64_t kFullRuns = 100;
constexpr std::uint64_t kSmokeRuns = 10;
const std::vector<std::uint64_t> kFullN = {10000, 50000, 100000};
const std::vector<std::uint64_t> kTableParams = {0, 1, 2, 4, 8, 16};
const std::vector<std::uint64_t> kTable4Batches = {10, 100, 1000, 10000,
                                                   100000};
const std::vector<std::uint64_t> kFig8Batches = {
    5, 10, 50, 100, 500, 1000, 5000, 10000, 50000, 100000, 500000};

std::string FormatMinutes(double seconds) {
  const double minutes = seconds / 60.0;
  char buf[64];
  if (minutes < 1.0) {
    std::snprintf(buf, sizeof(buf), "%.0f s", std::ceil(seconds));
  } else {
    std::snprintf(buf, sizeof(buf), "%.0f min", std::ceil(minutes));
  }
  return buf;
}

ExperimentConfig Make(ProcessSpec spec, std::uint64_t n, std::uint64_t m,
                      std::uint64_t reps, std::string id = "") {
  ExperimentConfig c;
  c.spec = std::move(spec);
  c.n = n;
  c.m = m;
  c.repetitions = reps;
  c.id = std::move(id);
  c.id = config_id(c);
  c.master_seed = seed_for_id(c.id);
  c.note = "expected runtime " + FormatMinutes(expected_core_seconds(c)) +
           " on one core";
  return c;
}

// sigma = 0 is the noiseless two-choice process.
ExperimentConfig SigmaConfig(std::uint64_t sigma, std::uint64_t n,
                             std::uint64_t m, std::uint64_t reps) {
  if (sigma == 0) {
    return Make(TwoChoice{}, n, m, reps,
                "sigma_noisy_load_sigma0_n" + std::to_string(n) + "_m" +
                    std::to_string(m));
  }
  return Make(SigmaNoisyLoad{static_cast<double>(sigma)}, n, m, reps);
}

void AddTable3(std::vector<ExperimentConfig>& out,
               const std::vector<std::uint64_t>& ns,
               const std::vector<std::uint64_t>& params, std::uint64_t reps) {
  for (std::uint64_t n : ns) {
    for (std::uint64_t g : params) out.push_back(Make(GBounded{g}, n, 1000 * n, reps));
    for (std::uint64_t g : params) {
      out.push_back(Make(GMyopicComp{g}, n, 1000 * n, reps));
    }
    for (std::uint64_t s : params) out.push_back(SigmaConfig(s, n, 1000 * n, reps));
  }
}

void AddBatches(std::vector<ExperimentConfig>& out,
                const std::vector<std::uint64_t>& batches, std::uint64_t n,
                std::uint64_t reps) {
  for (std::uint64_t b : batches) out.push_back(Make(BBatch{b}, n, 1000 * n, reps));
  for (std::uint64_t b : batches) {
    out.push_back(Make(OneChoice{}, n, b, reps,
                       "one_choice_b" + std::to_string(b) + "_n" +
                           std::to_string(n)));
  }
}

std::vector<ExperimentConfig> LowerBounds() {
  std::vector<ExperimentConfig> out;
  const std::uint64_t n = 10000;
  {
    const std::uint64_t g = 16;
    ExperimentConfig c = Make(GMyopicComp{g}, n, n * g / 2, kFullRuns);
    c.assertion = GapAssertion{static_cast<double>(g) / 35.0, 0.99};
    out.push_back(c);
  }
  for (double sigma : {32.0, 64.0}) {
    const double half = 0.5 * std::pow(sigma, 0.8);
    const auto m = static_cast<std::uint64_t>(std::floor(half * n));
    ExperimentConfig c = Make(SigmaNoisyLoad{sigma}, n, m, kFullRuns);
    const double bound =
        std::min(half, std::pow(sigma, 0.4) * std::sqrt(std::log(double(n))) / 30.0);
    c.assertion = GapAssertion{bound, 0.99};
    out.push_back(c);
  }
  // The first batch of b-Batch against one-choice with b balls.
  const std::uint64_t b = 100000;
  out.push_back(Make(BBatch{b}, n, b, kFullRuns,
                     "b_batch_first_batch_b" + std::to_string(b) + "_n" +
                         std::to_string(n)));
  out.push_back(Make(OneChoice{}, n, b, kFullRuns,
                     "one_choice_b" + std::to_string(b) + "_n" +
                         std::to_string(n)));
  // Adversarial comparisons majorize two-choice at m = n.
  out.push_back(Make(GAdvComp{4, AdversaryStrategy::GreedyMax(), false}, n, n,
                     1000));
  out.push_back(Make(TwoChoice{}, n, n, 1000));
  return out;
}

}  // namespace

std::uint64_t seed_for_id(const std::string& id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : id) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double expected_core_seconds(const ExperimentConfig& config) {
  // Measured single-core step rates for n = 10^4.
  double rate = 3e7;
  if (std::holds_alternative<OneChoice>(config.spec)) rate = 1.5e8;
  if (std::holds_alternative<BBatch>(config.spec) ||
      std::holds_alternative<TauDelay>(config.spec)) {
    rate = 2.5e7;
  }
  return static_cast<double>(config.m) *
         static_cast<double>(config.repetitions) / rate;
}

std::vector<std::string> preset_names() {
  return {"table3", "table4", "fig7", "fig8", "lower_bounds", "scaled_desk"};
}

std::vector<ExperimentConfig> preset(const std::string& name) {
  std::vector<ExperimentConfig> out;
  if (name == "table3") {
    AddTable3(out, kFullN, kTableParams, kFullRuns);
  } else if (name == "table4") {
    AddBatches(out, kTable4Batches, 10000, kFullRuns);
  } else if (name == "fig7") {
    std::vector<std::uint64_t> params;
    for (std::uint64_t g = 1; g <= 20; ++g) params.push_back(g);
    AddTable3(out, kFullN, params, kFullRuns);
  } else if (name == "fig8") {
    AddBatches(out, kFig8Batches, 10000, kFullRuns);
  } else if (name == "lower_bounds") {
    out = LowerBounds();
  } else if (name == "scaled_desk") {
    AddTable3(out, {10000}, kTableParams, kFullRuns);
    AddBatches(out, kTable4Batches, 10000, kFullRuns);
    AddTable3(out, {1000}, kTableParams, kSmokeRuns);
  } else {
    std::string names;
    for (const auto& p : preset_names()) names += (names.empty() ? "" : ", ") + p;
    throw ConfigError("unknown preset '" + name + "' (available: " + names + ")");
  }
  return out;
}

}  // namespace nba
