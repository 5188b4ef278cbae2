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


#ifndef NBA_PRESETS_H_
#define NBA_PRESETS_H_

#include <string>
#include <vector>

#include "nba/experiment.h"

namespace nba {

// table3 | table4 | fig7 | fig8 | lower_bounds | scaled_desk
std::vector<std::string> preset_names();

// Throws ConfigError listing the available names for an unknown preset.
std::vector<ExperimentConfig> preset(const std::string& name);

// Rough single-core runtime estimate used in the preset notes.
double expected_core_seconds(const ExperimentConfig& config);

// Stable seed derived from a config id (FNV-1a).
std::uint64_t seed_for_id(const std::string& id);

}  // namespace nba

#endif  // NBA_PRESETS_H_
