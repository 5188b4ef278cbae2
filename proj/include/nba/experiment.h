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

#ifndef NBA_EXPERIMENT_H_
#define NBA_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nba/potentials.h"
#include "nba/process.h"

namespace nba {

inline constexpr std::uint64_t kMaxCheckpoints = 10000;

// Requires at least `min_fraction` of runs to end with gap >= min_gap.
struct GapAssertion {
  double min_gap = 0.0;
  double min_fraction = 1.0;
};

struct ExperimentConfig {
  std::string id;  // empty: derived from the other fields
  ProcessSpec spec = TwoChoice{};
  std::uint64_t n = 1;
  std::uint64_t m = 1;
  std::uint64_t repetitions = 1;
  std::uint64_t master_seed = 0;
  // Steps between samples; 0 = final only, or m/100 when potentials are set.
  std::uint64_t checkpoint_interval = 0;
  std::vector<PotentialSpec> potentials;
  std::string out_dir;
  // Wall-clock times make output depend on the machine, so they are only
  // written when asked for.
  bool record_timing = false;
  std::optional<GapAssertion> assertion;
  std::string note;
};

// Throws ConfigError naming the violated invariant.
void validate(const ExperimentConfig& config);

std::string config_id(const ExperimentConfig& config);

// The spec's main parameter (g, b, tau, sigma, beta, rho(1)); 0 if none.
double g_or_param(const ProcessSpec& spec);

// Copy of `spec` with a named parameter replaced (g, b, tau, sigma, beta,
// rho). Throws ConfigError if the spec has no such parameter.
ProcessSpec with_parameter(const ProcessSpec& spec, const std::string& name,
                           double value);

// Effective checkpoint interval (0 = none).
std::uint64_t checkpoint_interval(const ExperimentConfig& config);

struct CheckpointSample {
  std::uint64_t t = 0;
  double gap = 0.0;
  std::vector<double> potential_values;  // one per config potential
};

struct RunRecord {
  std::uint64_t repetition = 0;
  std::uint64_t seed = 0;  // derived substream seed
  double final_gap = 0.0;
  double runtime_ms = 0.0;
  std::uint64_t adversary_violations = 0;
  std::vector<CheckpointSample> checkpoints;
};

struct GapSummary {
  std::vector<double> gaps;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
  // Gap rounded to the nearest integer -> percentage of runs.
  std::map<std::int64_t, double> histogram;
  // (t, mean gap over runs) per checkpoint.
  std::vector<std::pair<std::uint64_t, double>> checkpoint_mean_gap;
};

GapSummary summarize(const std::vector<RunRecord>& runs);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunRecord> runs;
  GapSummary summary;
  std::optional<double> assertion_fraction;  // share of runs meeting it
  bool assertion_passed = true;
};

// Runs every repetition r on Substream(master_seed, r). Output depends only
// on the config, not on `workers` (0 = hardware concurrency).
ExperimentResult run_experiment(const ExperimentConfig& config,
                                unsigned workers = 1);

// A single run, exposed for tests and the acceptance suite.
RunRecord run_once(const ExperimentConfig& config, std::uint64_t repetition);

struct SweepRow {
  std::string parameter;
  double value = 0.0;
  std::string config_id;
  std::optional<GapSummary> summary;
  std::string error;  // set when this grid point failed
};

// One experiment per grid value. Per-point errors are recorded in the row.
// Throws ConfigError for an empty grid.
std::vector<SweepRow> sweep(const ExperimentConfig& base,
                            const std::string& parameter,
                            const std::vector<double>& values,
                            unsigned workers = 1);

// Worker count from an explicit value, else NBA_WORKERS, else hardware.
unsigned resolve_workers(std::optional<unsigned> requested);

// CSV writers. Columns of runs.csv:
// config_id,process,g_or_param,n,m,repetition,seed,final_gap,
// final_gap_rounded,runtime_ms
std::string runs_csv(const std::vector<ExperimentResult>& results);
// config_id,repetition,checkpoint_t,gap,potential_name,potential_value
std::string checkpoints_csv(const std::vector<ExperimentResult>& results);
// parameter,value,config_id,mean_gap,stddev,min,max,error
std::string sweep_csv(const std::vector<SweepRow>& rows);

// Shortest round-trip decimal form, locale independent.
std::string format_double(double v);

}  // namespace nba

#endif  // NBA_EXPERIMENT_H_
