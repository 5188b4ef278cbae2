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


#ifndef NBA_CONFIG_JSON_H_
#define NBA_CONFIG_JSON_H_

#include <string>
#include <vector>

#include "nba/experiment.h"
#include "nba/verify.h"
#include "json.hpp"

namespace nba {

using Json = nlohmann::ordered_json;

// Parses text, throwing ConfigError with line and column on syntax errors.
Json parse_json(const std::string& text, const std::string& source = "input");

Json to_json(const ProcessSpec& spec);
Json to_json(const PotentialSpec& spec);
Json to_json(const ExperimentConfig& config);

// Strict readers: unknown keys, wrong types and invalid values throw
// ConfigError.
ProcessSpec process_from_json(const Json& j);
PotentialSpec potential_from_json(const Json& j);
ExperimentConfig config_from_json(const Json& j);

// Accepts a single config object, an array of configs, or an object with an
// "experiments" array.
std::vector<ExperimentConfig> configs_from_json(const Json& j);

struct SweepConfig {
  ExperimentConfig base;
  std::string parameter;
  std::vector<double> values;
};

// {"base": {...}, "parameter": "g", "values": [...]}
SweepConfig sweep_from_json(const Json& j);
Json to_json(const SweepConfig& sweep);

Json summary_json(const GapSummary& summary);
Json result_json(const ExperimentResult& result);
Json sweep_json(const std::vector<SweepRow>& rows);
Json verify_json(const std::vector<SuiteReport>& reports);

}  // namespace nba

#endif  // NBA_CONFIG_JSON_H_
