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

#include "nba/experiment.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "nba/errors.h"
#include "nba/load_state.h"
#include "nba/rng.h"

namespace nba {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::uint64_t ToCount(const std::string& name, double value) {
  if (!(value >= 0.0) || value != std::floor(value) || value > 1e18) {
    throw ConfigError("parameter '" + name +
                      "' must be a non-negative integer, got " +
                      format_double(value));
  }
  return static_cast<std::uint64_t>(value);
}

std::string ParamTag(const ProcessSpec& spec) {
  return std::visit(
      Overloaded{
          [](const OneChoice&) { return std::string(); },
          [](const TwoChoice& s) {
            return std::string(s.tie_break == TieBreak::kLowerIndex
                                   ? "_lower_index"
                                   : "");
          },
          [](const OnePlusBeta& s) { return "_beta" + format_double(s.beta); },
          [](const GBounded& s) { return "_g" + std::to_string(s.g); },
          [](const GMyopicComp& s) { return "_g" + std::to_string(s.g); },
          [](const NoisyComp& s) { return "_rho" + format_double(s.rho(1)); },
          [](const SigmaNoisyLoad& s) {
            return "_sigma" + format_double(s.sigma) +
                   (s.mode == SigmaMode::kGaussianEstimates ? "_gaussian" : "");
          },
          [](const GAdvComp& s) {
            return "_g" + std::to_string(s.g) + "_" + s.adversary.name;
          },
          [](const BBatch& s) { return "_b" + std::to_string(s.b); },
          [](const TauDelay& s) {
            return "_tau" + std::to_string(s.tau) + "_" + s.staleness.name;
          },
      },
      spec);
}

double Quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double g_or_param(const ProcessSpec& spec) {
  return std::visit(
      Overloaded{
          [](const OneChoice&) { return 0.0; },
          [](const TwoChoice&) { return 0.0; },
          [](const OnePlusBeta& s) { return s.beta; },
          [](const GBounded& s) { return static_cast<double>(s.g); },
          [](const GMyopicComp& s) { return static_cast<double>(s.g); },
          [](const NoisyComp& s) { return s.rho(1); },
          [](const SigmaNoisyLoad& s) { return s.sigma; },
          [](const GAdvComp& s) { return static_cast<double>(s.g); },
          [](const BBatch& s) { return static_cast<double>(s.b); },
          [](const TauDelay& s) { return static_cast<double>(s.tau); },
      },
      spec);
}

ProcessSpec with_parameter(const ProcessSpec& spec, const std::string& name,
                           double value) {
  ProcessSpec out = spec;
  const bool ok = std::visit(
      Overloaded{
          [&](OnePlusBeta& s) {
            if (name != "beta") return false;
            s.beta = value;
            return true;
          },
          [&](GBounded& s) {
            if (name != "g") return false;
            s.g = ToCount(name, value);
            return true;
          },
          [&](GMyopicComp& s) {
            if (name != "g") return false;
            s.g = ToCount(name, value);
            return true;
          },
          [&](NoisyComp& s) {
            if (name != "rho") return false;
            s.rho = RhoFunction::Constant(value);
            return true;
          },
          [&](SigmaNoisyLoad& s) {
            if (name != "sigma") return false;
            s.sigma = value;
            return true;
          },
          [&](GAdvComp& s) {
            if (name != "g") return false;
            s.g = ToCount(name, value);
            return true;
          },
          [&](BBatch& s) {
            if (name != "b") return false;
            s.b = ToCount(name, value);
            return true;
          },
          [&](TauDelay& s) {
            if (name != "tau") return false;
            s.tau = ToCount(name, value);
            return true;
          },
          [&](auto&) { return false; },
      },
      out);
  if (!ok) {
    throw ConfigError("process '" + process_name(spec) +
                      "' has no parameter '" + name + "'");
  }
  return out;
}

std::string config_id(const ExperimentConfig& config) {
  if (!config.id.empty()) return config.id;
  return process_name(config.spec) + ParamTag(config.spec) + "_n" +
         std::to_string(config.n) + "_m" + std::to_string(config.m);
}

std::uint64_t checkpoint_interval(const ExperimentConfig& config) {
  if (config.checkpoint_interval > 0) return config.checkpoint_interval;
  if (config.potentials.empty()) return 0;
  return std::max<std::uint64_t>(1, config.m / 100);
}

void validate(const ExperimentConfig& config) {
  if (config.n < 1) throw ConfigError("config: n must be >= 1");
  if (config.m < 1) throw ConfigError("config: m must be >= 1");
  if (config.repetitions < 1) {
    throw ConfigError("config: repetitions must be >= 1");
  }
  // Resource guards: bin ids are stored in 32 bits by the delay window, and
  // one load vector per worker must fit comfortably in memory.
  if (config.n > (std::uint64_t{1} << 28)) {
    throw ConfigError("config: n exceeds the resource guard 2^28");
  }
  try {
    validate(config.spec);
    for (const auto& p : config.potentials) validate(p, config.n);
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (const auto* td = std::get_if<TauDelay>(&config.spec)) {
    if (td->tau > (std::uint64_t{1} << 28)) {
      throw ConfigError("config: tau exceeds the resource guard 2^28");
    }
  }
  const std::uint64_t interval = checkpoint_interval(config);
  if (interval > 0 && config.m / interval > kMaxCheckpoints) {
    throw ConfigError("config: checkpoint_interval yields more than " +
                      std::to_string(kMaxCheckpoints) + " checkpoints");
  }
  if (config.assertion) {
    const auto& a = *config.assertion;
    if (!(a.min_fraction >= 0.0 && a.min_fraction <= 1.0)) {
      throw ConfigError("config: assertion min_fraction must be in [0,1]");
    }
  }
}

RunRecord run_once(const ExperimentConfig& config, std::uint64_t repetition) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.repetition = repetition;
  const RngStream stream{config.master_seed, repetition};
  rec.seed = stream.DerivedSeed();
  Rng rng = stream.Engine();
  LoadState state(config.n);
  Process process(config.spec, state);
  const std::uint64_t interval = checkpoint_interval(config);
  if (interval == 0) {
    process.Advance(state, rng, config.m);
  } else {
    while (state.t() < config.m) {
      const std::uint64_t next = std::min(config.m, state.t() + interval);
      process.Advance(state, rng, next - state.t());
      if (state.t() % interval != 0) continue;
      CheckpointSample sample;
      sample.t = state.t();
      sample.gap = gap(state);
      for (const auto& p : config.potentials) {
        sample.potential_values.push_back(eval_loads(p, state));
      }
      rec.checkpoints.push_back(std::move(sample));
    }
  }
  rec.final_gap = gap(state);
  rec.adversary_violations = process.aux().adversary_violations;
  rec.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return rec;
}

GapSummary summarize(const std::vector<RunRecord>& runs) {
  GapSummary s;
  for (const auto& r : runs) s.gaps.push_back(r.final_gap);
  if (s.gaps.empty()) return s;
  long double sum = 0;
  for (double g : s.gaps) sum += g;
  const auto count = static_cast<long double>(s.gaps.size());
  s.mean = static_cast<double>(sum / count);
  long double sq = 0;
  for (double g : s.gaps) sq += (g - s.mean) * (g - s.mean);
  s.stddev = s.gaps.size() > 1
                 ? static_cast<double>(std::sqrt(sq / (count - 1)))
                 : 0.0;
  std::vector<double> sorted = s.gaps;
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  s.median = Quantile(sorted, 0.5);
  s.q05 = Quantile(sorted, 0.05);
  s.q95 = Quantile(sorted, 0.95);
  std::map<std::int64_t, std::uint64_t> counts;
  for (double g : s.gaps) ++counts[std::llround(g)];
  for (const auto& [k, c] : counts) {
    s.histogram[k] = 100.0 * static_cast<double>(c) / static_cast<double>(count);
  }
  const std::size_t checkpoints = runs.front().checkpoints.size();
  for (std::size_t c = 0; c < checkpoints; ++c) {
    long double g = 0;
    for (const auto& r : runs) g += r.checkpoints[c].gap;
    s.checkpoint_mean_gap.emplace_back(runs.front().checkpoints[c].t,
                                       static_cast<double>(g / count));
  }
  return s;
}

unsigned resolve_workers(std::optional<unsigned> requested) {
  if (requested && *requested > 0) return *requested;
  if (const char* env = std::getenv("NBA_WORKERS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                unsigned workers) {
  validate(config);
  ExperimentResult result;
  result.config = config;
  result.runs.resize(config.repetitions);
  if (workers == 0) workers = resolve_workers(std::nullopt);
  const auto threads = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, config.repetitions));

  std::atomic<std::uint64_t> next{0};
  std::vector<std::exception_ptr> errors(config.repetitions);
  auto work = [&]() {
    for (;;) {
      const std::uint64_t r = next.fetch_add(1);
      if (r >= config.repetitions) return;
      try {
        result.runs[r] = run_once(config, r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  result.summary = summarize(result.runs);
  if (config.assertion) {
    std::uint64_t ok = 0;
    for (double g : result.summary.gaps) {
      if (g >= config.assertion->min_gap) ++ok;
    }
    const double frac =
        static_cast<double>(ok) / static_cast<double>(config.repetitions);
    result.assertion_fraction = frac;
    result.assertion_passed = frac >= config.assertion->min_fraction;
  }
  return result;
}

std::vector<SweepRow> sweep(const ExperimentConfig& base,
                            const std::string& parameter,
                            const std::vector<double>& values,
                            unsigned workers) {
  if (values.empty()) throw ConfigError("sweep: parameter grid is empty");
  std::vector<SweepRow> rows;
  for (double v : values) {
    SweepRow row;
    row.parameter = parameter;
    row.value = v;
    try {
      ExperimentConfig cfg = base;
      if (parameter == "n") {
        cfg.n = ToCount(parameter, v);
      } else if (parameter == "m") {
        cfg.m = ToCount(parameter, v);
      } else {
        cfg.spec = with_parameter(base.spec, parameter, v);
      }
      if (!base.id.empty()) cfg.id = base.id + "_" + parameter + format_double(v);
      row.config_id = config_id(cfg);
      row.summary = run_experiment(cfg, workers).summary;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string runs_csv(const std::vector<ExperimentResult>& results) {
  std::ostringstream out;
  out << "config_id,process,g_or_param,n,m,repetition,seed,final_gap,"
         "final_gap_rounded,runtime_ms\n";
  for (const auto& res : results) {
    const std::string id = config_id(res.config);
    const std::string proc = process_name(res.config.spec);
    const std::string param = format_double(g_or_param(res.config.spec));
    for (const auto& r : res.runs) {
      out << id << ',' << proc << ',' << param << ',' << res.config.n << ','
          << res.config.m << ',' << r.repetition << ',' << r.seed << ','
          << format_double(r.final_gap) << ',' << std::llround(r.final_gap)
          << ',';
      if (res.config.record_timing) {
        char buf[64];
        auto p = std::to_chars(buf, buf + sizeof(buf), r.runtime_ms,
                               std::chars_format::fixed, 3);
        out << std::string(buf, p.ptr);
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string checkpoints_csv(const std::vector<ExperimentResult>& results) {
  std::ostringstream out;
  out << "config_id,repetition,checkpoint_t,gap,potential_name,"
         "potential_value\n";
  for (const auto& res : results) {
    const std::string id = config_id(res.config);
    for (const auto& r : res.runs) {
      for (const auto& c : r.checkpoints) {
        const std::string prefix = id + ',' + std::to_string(r.repetition) +
                                   ',' + std::to_string(c.t) + ',' +
                                   format_double(c.gap) + ',';
        if (c.potential_values.empty()) {
          out << prefix << ",\n";
          continue;
        }
        for (std::size_t k = 0; k < c.potential_values.size(); ++k) {
          out << prefix << potential_name(res.config.potentials[k]) << ','
              << format_double(c.potential_values[k]) << '\n';
        }
      }
    }
  }
  return out.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "parameter,value,config_id,mean_gap,stddev,min,max,error\n";
  for (const auto& r : rows) {
    out << r.parameter << ',' << format_double(r.value) << ',' << r.config_id
        << ',';
    if (r.summary) {
      out << format_double(r.summary->mean) << ','
          << format_double(r.summary->stddev) << ','
          << format_double(r.summary->min) << ','
          << format_double(r.summary->max) << ',';
    } else {
      out << ",,,,";
    }
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << err << '\n';
  }
  return out.str();
}

}  // namespace nba
