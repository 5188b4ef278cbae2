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


#include "nba/cli.h"

#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nba/config_json.h"
#include "nba/constants.h"
#include "nba/errors.h"
#include "nba/experiment.h"
#include "nba/presets.h"
#include "nba/verify.h"

namespace nba {
namespace {

enum class LogLevel { kError, kWarn, kInfo, kDebug };

struct Options {
  std::string config_path;
  std::string preset_name;
  std::string out_dir;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::vector<std::string> suites;
  std::optional<std::uint64_t> g;
  std::optional<std::uint64_t> n;
  std::optional<double> log_n;
  bool negative_control = false;
  bool timing = false;
  std::string log_level = "info";
};

class Logger {
 public:
  Logger(std::ostream& err, LogLevel level) : err_(err), level_(level) {}
  void Info(const std::string& msg) const {
    if (level_ >= LogLevel::kInfo) err_ << "[info] " << msg << "\n";
  }
  void Warn(const std::string& msg) const {
    if (level_ >= LogLevel::kWarn) err_ << "[warn] " << msg << "\n";
  }

 private:
  std::ostream& err_;
  LogLevel level_;
};

LogLevel ParseLogLevel(const std::string& s) {
  if (s == "error") return LogLevel::kError;
  if (s == "warn") return LogLevel::kWarn;
  if (s == "info") return LogLevel::kInfo;
  if (s == "debug") return LogLevel::kDebug;
  throw ConfigError("--log-level must be error, warn, info or debug");
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw RangeError("cannot write '" + path.string() + "'");
}

std::filesystem::path PrepareOut(const std::string& dir) {
  std::filesystem::path p = dir.empty() ? "out" : dir;
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) {
    throw RangeError("cannot create output directory '" + p.string() +
                     "': " + ec.message());
  }
  return p;
}

void ApplyOverrides(ExperimentConfig& c, const Options& o) {
  if (o.seed) c.master_seed = *o.seed;
  if (o.n) c.n = *o.n;
  if (o.g) c.spec = with_parameter(c.spec, "g", static_cast<double>(*o.g));
  if (o.timing) c.record_timing = true;
  if (o.n || o.g) c.id.clear();
  validate(c);
}

std::vector<ExperimentConfig> LoadConfigs(const Options& o) {
  if (o.config_path.empty() == o.preset_name.empty()) {
    throw ConfigError("run: pass exactly one of --config or --preset");
  }
  std::vector<ExperimentConfig> configs;
  if (!o.config_path.empty()) {
    configs = configs_from_json(
        parse_json(ReadFile(o.config_path), o.config_path));
  } else {
    configs = preset(o.preset_name);
  }
  for (auto& c : configs) ApplyOverrides(c, o);
  return configs;
}

int CmdRun(const Options& o, std::ostream& out, const Logger& log) {
  const std::vector<ExperimentConfig> configs = LoadConfigs(o);
  const unsigned workers = resolve_workers(o.workers);
  const std::filesystem::path dir = PrepareOut(o.out_dir);
  std::vector<ExperimentResult> results;
  Json experiments = Json::array();
  bool assertions_ok = true;
  for (const auto& c : configs) {
    log.Info("running " + config_id(c) + " (" +
             std::to_string(c.repetitions) + " runs, " +
             std::to_string(workers) + " workers)");
    results.push_back(run_experiment(c, workers));
    const ExperimentResult& r = results.back();
    log.Info(config_id(c) + ": mean gap " + format_double(r.summary.mean));
    if (!r.assertion_passed) {
      assertions_ok = false;
      log.Warn(config_id(c) + ": gap assertion failed");
    }
    experiments.push_back(result_json(r));
  }
  Json summary = {{"experiments", experiments}};
  WriteFile(dir / "summary.json", summary.dump(2) + "\n");
  WriteFile(dir / "runs.csv", runs_csv(results));
  bool any_checkpoints = false;
  for (const auto& c : configs) any_checkpoints |= checkpoint_interval(c) > 0;
  if (any_checkpoints) {
    WriteFile(dir / "checkpoints.csv", checkpoints_csv(results));
  }
  out << "wrote " << (dir / "summary.json").string() << " and "
      << (dir / "runs.csv").string() << "\n";
  return assertions_ok ? kExitOk : kExitViolation;
}

int CmdSweep(const Options& o, std::ostream& out, const Logger& log) {
  if (o.config_path.empty()) throw ConfigError("sweep: --config is required");
  SweepConfig s =
      sweep_from_json(parse_json(ReadFile(o.config_path), o.config_path));
  ApplyOverrides(s.base, o);
  const unsigned workers = resolve_workers(o.workers);
  const std::filesystem::path dir = PrepareOut(o.out_dir);
  log.Info("sweeping " + s.parameter + " over " +
           std::to_string(s.values.size()) + " values");
  const std::vector<SweepRow> rows = sweep(s.base, s.parameter, s.values, workers);
  Json summary = {{"sweep", to_json(s)}, {"rows", sweep_json(rows)}};
  WriteFile(dir / "summary.json", summary.dump(2) + "\n");
  WriteFile(dir / "sweep.csv", sweep_csv(rows));
  for (const auto& row : rows) {
    if (!row.error.empty()) log.Warn(row.config_id + ": " + row.error);
  }
  out << "wrote " << (dir / "summary.json").string() << " and "
      << (dir / "sweep.csv").string() << "\n";
  return kExitOk;
}

int CmdPreset(const Options& o, std::ostream& out) {
  if (o.preset_name.empty()) throw ConfigError("preset: a name is required");
  const std::vector<ExperimentConfig> configs = preset(o.preset_name);
  Json list = Json::array();
  double seconds = 0.0;
  for (const auto& c : configs) {
    list.push_back(to_json(c));
    seconds += expected_core_seconds(c);
  }
  Json j = {{"preset", o.preset_name},
            {"expected_core_seconds", seconds},
            {"experiments", list}};
  const std::string text = j.dump(2) + "\n";
  if (!o.out_dir.empty()) {
    WriteFile(PrepareOut(o.out_dir) / (o.preset_name + ".json"), text);
  }
  out << text;
  return kExitOk;
}

int CmdVerify(const Options& o, std::ostream& out) {
  VerifyOptions v;
  if (o.trials) v.trials = *o.trials;
  if (o.seed) v.seed = *o.seed;
  v.negative_control = o.negative_control;
  if (v.trials == 0) throw ConfigError("verify: --trials must be >= 1");
  std::vector<DropSuite> suites;
  for (const auto& name : o.suites) suites.push_back(parse_suite(name));
  if (suites.empty()) suites = default_suites();
  const std::vector<SuiteReport> reports = verify_drop_inequalities(suites, v);
  std::uint64_t violations = 0;
  for (const auto& r : reports) violations += r.violations;
  const std::string text = verify_json(reports).dump(2) + "\n";
  if (!o.out_dir.empty()) {
    WriteFile(PrepareOut(o.out_dir) / "verify.json", text);
  }
  out << text;
  return violations == 0 ? kExitOk : kExitViolation;
}

Json PlanJson(const LayerPlan& plan) {
  return Json{{"g", plan.g}, {"log_n", plan.log_n}, {"k", plan.k},
              {"z", plan.z}, {"phi", plan.phi},     {"psi", plan.psi}};
}

int CmdConstants(const Options& o, std::ostream& out) {
  if (!o.g) throw ConfigError("constants: --g is required");
  const std::uint64_t n = o.n.value_or(100000);
  ConstantsLedger ledger;
  try {
    ledger = constants(*o.g, n);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  Json entries = Json::array();
  for (const auto& e : ledger.Entries()) {
    Json ej = {{"name", e.name}, {"formula", e.formula},
               {"specified", e.specified}};
    if (e.specified) {
      ej["value"] = e.value;
    } else {
      ej["value"] = nullptr;
    }
    entries.push_back(ej);
  }
  const double log_n =
      o.log_n.value_or(std::log(static_cast<double>(n)));
  Json j = {{"g", *o.g}, {"n", n}, {"log_n", log_n}, {"ledger", entries}};
  if (*o.g <= 1) {
    j["layer_plan"] = nullptr;
    j["layer_plan_note"] = "requires g > 1";
  } else {
    try {
      j["layer_plan"] = PlanJson(layer_plan(static_cast<double>(*o.g), log_n));
    } catch (const RangeError& e) {
      j["layer_plan"] = nullptr;
      j["layer_plan_note"] = e.what();
    }
    const EllBound ell = ell_lower_bound(static_cast<double>(*o.g), log_n);
    j["ell_lower_bound"] = {{"ell", ell.ell}, {"in_range", ell.in_range}};
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  Options o;
  CLI::App app{"Noisy balls-into-bins simulator and oracle", "nba"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--out", o.out_dir, "Output directory");
  app.add_option("--workers", o.workers, "Worker threads (env NBA_WORKERS)");
  app.add_option("--seed", o.seed, "Master seed override");
  app.add_option("--log-level", o.log_level, "error | warn | info | debug");

  CLI::App* run = app.add_subcommand("run", "Run experiments");
  run->add_option("--config", o.config_path, "JSON config file");
  run->add_option("--preset", o.preset_name, "Preset name");
  run->add_option("--n", o.n, "Override n");
  run->add_option("--g", o.g, "Override g");
  run->add_flag("--timing", o.timing, "Record runtime_ms");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep_cmd->add_option("--config", o.config_path, "JSON sweep file")
      ->required();
  sweep_cmd->add_option("--n", o.n, "Override n");
  sweep_cmd->add_flag("--timing", o.timing, "Record runtime_ms");

  CLI::App* preset_cmd = app.add_subcommand("preset", "Print a preset");
  preset_cmd->add_option("name,--preset", o.preset_name, "Preset name")
      ->required();

  CLI::App* verify = app.add_subcommand("verify", "Run the drop-inequality suites");
  verify->add_option("--trials", o.trials, "Trials per suite");
  verify->add_option("--suite", o.suites, "Suites (comma separated)")
      ->delimiter(',');
  verify->add_flag("--negative-control", o.negative_control,
                   "Feed corrupted vectors; suites must then fail");

  CLI::App* consts = app.add_subcommand("constants", "Print the constants ledger");
  consts->add_option("--g", o.g, "g >= 1");
  consts->add_option("--n", o.n, "n >= 2");
  consts->add_option("--log-n", o.log_n, "Natural log of n for the layer plan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const Logger log(err, ParseLogLevel(o.log_level));
    if (run->parsed()) return CmdRun(o, out, log);
    if (sweep_cmd->parsed()) return CmdSweep(o, out, log);
    if (preset_cmd->parsed()) return CmdPreset(o, out);
    if (verify->parsed()) return CmdVerify(o, out);
    if (consts->parsed()) return CmdConstants(o, out);
    err << "error: no command\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParameterError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const RangeError& e) {
    err << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const SizeError& e) {
    err << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const EvaluationError& e) {
    err << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::bad_alloc&) {
    err << "runtime error: out of memory\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace nba
