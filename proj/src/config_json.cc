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


#include "nba/config_json.h"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nba/errors.h"

namespace nba {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Reads the fields of one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string context)
      : j_(j), context_(std::move(context)) {
    if (!j_.is_object()) Fail("expected a JSON object");
  }

  bool Has(const std::string& key) const { return j_.contains(key); }

  const Json& Raw(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) Fail("missing required field '" + key + "'");
    return j_.at(key);
  }

  std::uint64_t U64(const std::string& key) {
    const Json& v = Raw(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d >= 0.0 && d < 18446744073709551616.0 && std::floor(d) == d) {
        return static_cast<std::uint64_t>(d);
      }
    }
    Fail("field '" + key + "' must be a non-negative integer");
  }
  std::uint64_t U64(const std::string& key, std::uint64_t fallback) {
    return Has(key) ? U64(key) : (used_.insert(key), fallback);
  }

  double Double(const std::string& key) {
    const Json& v = Raw(key);
    if (!v.is_number()) Fail("field '" + key + "' must be a number");
    return v.get<double>();
  }
  double Double(const std::string& key, double fallback) {
    return Has(key) ? Double(key) : (used_.insert(key), fallback);
  }

  bool Bool(const std::string& key, bool fallback) {
    used_.insert(key);
    if (!Has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_boolean()) Fail("field '" + key + "' must be a boolean");
    return v.get<bool>();
  }

  std::string String(const std::string& key) {
    const Json& v = Raw(key);
    if (!v.is_string()) Fail("field '" + key + "' must be a string");
    return v.get<std::string>();
  }
  std::string String(const std::string& key, const std::string& fallback) {
    return Has(key) ? String(key) : (used_.insert(key), fallback);
  }

  void Finish() const {
    for (const auto& item : j_.items()) {
      if (!used_.count(item.key())) Fail("unknown field '" + item.key() + "'");
    }
  }

  [[noreturn]] void Fail(const std::string& message) const {
    throw ConfigError(context_ + ": " + message);
  }

 private:
  const Json& j_;
  std::string context_;
  std::set<std::string> used_;
};

Json RhoToJson(const RhoFunction& rho) {
  if (rho.sigma() > 0.0) return Json{{"sigma", rho.sigma()}};
  if (rho.table().empty()) return rho.tail();
  return Json{{"table", rho.table()}, {"tail", rho.tail()}};
}

RhoFunction RhoFromJson(const Json& j) {
  if (j.is_number()) return RhoFunction::Constant(j.get<double>());
  ObjectReader r(j, "rho");
  RhoFunction rho;
  if (r.Has("sigma")) {
    rho = RhoFunction::Sigma(r.Double("sigma"));
  } else if (r.Has("step")) {
    rho = RhoFunction::Step(r.U64("step"));
  } else {
    const Json& table = r.Raw("table");
    if (!table.is_array()) r.Fail("field 'table' must be an array");
    std::vector<double> values;
    for (const auto& v : table) {
      if (!v.is_number()) r.Fail("field 'table' must hold numbers");
      values.push_back(v.get<double>());
    }
    rho = RhoFunction::Table(std::move(values), r.Double("tail", 1.0));
  }
  r.Finish();
  return rho;
}

std::string TieBreakName(TieBreak t) {
  return t == TieBreak::kRandom ? "random" : "lower_index";
}

std::string ModeName(SigmaMode m) {
  return m == SigmaMode::kRhoFormula ? "rho_formula" : "gaussian_estimates";
}

template <class Fn>
auto WrapParameterErrors(const std::string& context, Fn fn) {
  try {
    return fn();
  } catch (const ParameterError& e) {
    throw ConfigError(context + ": " + e.what());
  }
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(
        e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError(source + ":" + std::to_string(line) + ":" +
                      std::to_string(column) + ": malformed JSON: " +
                      e.what());
  }
}

Json to_json(const ProcessSpec& spec) {
  Json j;
  j["process"] = process_name(spec);
  std::visit(
      Overloaded{
          [](const OneChoice&) {},
          [&](const TwoChoice& s) { j["tie_break"] = TieBreakName(s.tie_break); },
          [&](const OnePlusBeta& s) { j["beta"] = s.beta; },
          [&](const GBounded& s) { j["g"] = s.g; },
          [&](const GMyopicComp& s) { j["g"] = s.g; },
          [&](const NoisyComp& s) { j["rho"] = RhoToJson(s.rho); },
          [&](const SigmaNoisyLoad& s) {
            j["sigma"] = s.sigma;
            j["mode"] = ModeName(s.mode);
          },
          [&](const GAdvComp& s) {
            if (s.adversary.name == "scripted" || !s.adversary.first_probability) {
              throw ConfigError("g_adv_comp: adversary '" + s.adversary.name +
                                "' cannot be serialized");
            }
            try {
              AdversaryStrategy::FromName(s.adversary.name);
            } catch (const ParameterError&) {
              throw ConfigError("g_adv_comp: adversary '" + s.adversary.name +
                                "' cannot be serialized");
            }
            j["g"] = s.g;
            j["adversary"] = s.adversary.name;
            j["strict"] = s.strict;
          },
          [&](const BBatch& s) { j["b"] = s.b; },
          [&](const TauDelay& s) {
            if (s.staleness.kind == StalenessKind::kCustom) {
              throw ConfigError("tau_delay: staleness '" + s.staleness.name +
                                "' cannot be serialized");
            }
            j["tau"] = s.tau;
            j["staleness"] = s.staleness.name;
            if (s.staleness.kind == StalenessKind::kBatchBoundary) {
              j["staleness_batch"] = s.staleness.batch;
            }
          },
      },
      spec);
  return j;
}

ProcessSpec process_from_json(const Json& j) {
  ObjectReader r(j, "process");
  const std::string name = r.String("process");
  const std::string ctx = name;
  ProcessSpec spec = WrapParameterErrors(ctx, [&]() -> ProcessSpec {
    if (name == "one_choice") return OneChoice{};
    if (name == "two_choice") {
      const std::string tb = r.String("tie_break", "random");
      if (tb == "random") return TwoChoice{TieBreak::kRandom};
      if (tb == "lower_index") return TwoChoice{TieBreak::kLowerIndex};
      r.Fail("tie_break must be random or lower_index");
    }
    if (name == "one_plus_beta") return OnePlusBeta{r.Double("beta")};
    if (name == "g_bounded") return GBounded{r.U64("g")};
    if (name == "g_myopic_comp") return GMyopicComp{r.U64("g")};
    if (name == "noisy_comp") return NoisyComp{RhoFromJson(r.Raw("rho"))};
    if (name == "sigma_noisy_load") {
      SigmaNoisyLoad s;
      s.sigma = r.Double("sigma");
      const std::string mode = r.String("mode", "rho_formula");
      if (mode == "rho_formula") {
        s.mode = SigmaMode::kRhoFormula;
      } else if (mode == "gaussian_estimates") {
        s.mode = SigmaMode::kGaussianEstimates;
      } else {
        r.Fail("mode must be rho_formula or gaussian_estimates");
      }
      return s;
    }
    if (name == "g_adv_comp") {
      GAdvComp s;
      s.g = r.U64("g");
      s.adversary =
          AdversaryStrategy::FromName(r.String("adversary", "greedy_max"));
      s.strict = r.Bool("strict", false);
      return s;
    }
    if (name == "b_batch") return BBatch{r.U64("b")};
    if (name == "tau_delay") {
      TauDelay s;
      s.tau = r.U64("tau");
      const std::string st = r.String("staleness", "oldest");
      if (st == "batch_boundary") {
        s.staleness = StalenessStrategy::BatchBoundary(r.U64("staleness_batch"));
      } else {
        s.staleness = StalenessStrategy::FromName(st);
      }
      return s;
    }
    r.Fail("unknown process '" + name +
           "' (expected one_choice, two_choice, one_plus_beta, g_bounded, "
           "g_myopic_comp, noisy_comp, sigma_noisy_load, g_adv_comp, "
           "b_batch, tau_delay)");
  });
  r.Finish();
  WrapParameterErrors(ctx, [&] {
    validate(spec);
    return 0;
  });
  return spec;
}

Json to_json(const PotentialSpec& spec) {
  Json j;
  j["potential"] = potential_name(spec);
  std::visit(Overloaded{
                 [&](const GammaPotential& p) { j["gamma"] = p.gamma; },
                 [&](const LambdaPotential& p) {
                   j["alpha"] = p.alpha;
                   j["offset"] = p.offset;
                 },
                 [](const AbsoluteValuePotential&) {},
                 [](const QuadraticPotential&) {},
                 [&](const VPotential& p) {
                   j["alpha1"] = p.alpha1;
                   j["offset"] = p.offset;
                 },
                 [&](const SuperExpPotential& p) {
                   j["phi"] = p.phi;
                   j["z"] = p.z;
                 },
             },
             spec);
  return j;
}

PotentialSpec potential_from_json(const Json& j) {
  ObjectReader r(j, "potential");
  const std::string name = r.String("potential");
  PotentialSpec spec = [&]() -> PotentialSpec {
    if (name == "gamma") return GammaPotential{r.Double("gamma")};
    if (name == "lambda") {
      return LambdaPotential{r.Double("alpha"), r.Double("offset")};
    }
    if (name == "absolute_value") return AbsoluteValuePotential{};
    if (name == "quadratic") return QuadraticPotential{};
    if (name == "v") return VPotential{r.Double("alpha1"), r.Double("offset")};
    if (name == "super_exp") {
      return SuperExpPotential{r.Double("phi"), r.Double("z")};
    }
    r.Fail("unknown potential '" + name +
           "' (expected gamma, lambda, absolute_value, quadratic, v, "
           "super_exp)");
  }();
  r.Finish();
  return spec;
}

Json to_json(const ExperimentConfig& config) {
  Json j;
  j["id"] = config_id(config);
  j["spec"] = to_json(config.spec);
  j["n"] = config.n;
  j["m"] = config.m;
  j["repetitions"] = config.repetitions;
  j["seed"] = config.master_seed;
  j["checkpoint_interval"] = config.checkpoint_interval;
  Json pots = Json::array();
  for (const auto& p : config.potentials) pots.push_back(to_json(p));
  j["potentials"] = pots;
  if (!config.out_dir.empty()) j["out_dir"] = config.out_dir;
  j["record_timing"] = config.record_timing;
  if (config.assertion) {
    j["assertion"] = {{"min_gap", config.assertion->min_gap},
                      {"min_fraction", config.assertion->min_fraction}};
  }
  if (!config.note.empty()) j["note"] = config.note;
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  ObjectReader r(j, "config");
  ExperimentConfig c;
  c.id = r.String("id", "");
  c.spec = process_from_json(r.Raw("spec"));
  c.n = r.U64("n");
  c.m = r.U64("m");
  c.repetitions = r.U64("repetitions", 1);
  c.master_seed = r.U64("seed", 0);
  c.checkpoint_interval = r.U64("checkpoint_interval", 0);
  if (r.Has("potentials")) {
    const Json& pots = r.Raw("potentials");
    if (!pots.is_array()) r.Fail("field 'potentials' must be an array");
    for (const auto& p : pots) c.potentials.push_back(potential_from_json(p));
  }
  c.out_dir = r.String("out_dir", "");
  c.record_timing = r.Bool("record_timing", false);
  if (r.Has("assertion")) {
    ObjectReader a(r.Raw("assertion"), "assertion");
    GapAssertion ga;
    ga.min_gap = a.Double("min_gap");
    ga.min_fraction = a.Double("min_fraction", 1.0);
    a.Finish();
    if (!(ga.min_fraction >= 0.0 && ga.min_fraction <= 1.0)) {
      a.Fail("min_fraction must be in [0,1]");
    }
    c.assertion = ga;
  }
  c.note = r.String("note", "");
  r.Finish();
  validate(c);
  return c;
}

std::vector<ExperimentConfig> configs_from_json(const Json& j) {
  const Json* list = &j;
  if (j.is_object()) {
    if (!j.contains("experiments")) return {config_from_json(j)};
    ObjectReader r(j, "config file");
    list = &r.Raw("experiments");
    r.Finish();
  }
  if (!list->is_array() || list->empty()) {
    throw ConfigError("config file: expected a non-empty list of experiments");
  }
  std::vector<ExperimentConfig> out;
  for (const auto& item : *list) out.push_back(config_from_json(item));
  return out;
}

SweepConfig sweep_from_json(const Json& j) {
  ObjectReader r(j, "sweep");
  SweepConfig s;
  s.base = config_from_json(r.Raw("base"));
  s.parameter = r.String("parameter");
  const Json& values = r.Raw("values");
  if (!values.is_array()) r.Fail("field 'values' must be an array");
  for (const auto& v : values) {
    if (!v.is_number()) r.Fail("field 'values' must hold numbers");
    s.values.push_back(v.get<double>());
  }
  r.Finish();
  if (s.values.empty()) r.Fail("parameter grid is empty");
  return s;
}

Json to_json(const SweepConfig& sweep) {
  return Json{{"base", to_json(sweep.base)},
              {"parameter", sweep.parameter},
              {"values", sweep.values}};
}

Json summary_json(const GapSummary& s) {
  Json j;
  j["runs"] = s.gaps.size();
  j["mean"] = s.mean;
  j["stddev"] = s.stddev;
  j["min"] = s.min;
  j["max"] = s.max;
  j["median"] = s.median;
  j["q05"] = s.q05;
  j["q95"] = s.q95;
  Json hist = Json::object();
  for (const auto& [gap, pct] : s.histogram) hist[std::to_string(gap)] = pct;
  j["histogram"] = hist;
  j["gaps"] = s.gaps;
  if (!s.checkpoint_mean_gap.empty()) {
    Json series = Json::array();
    for (const auto& [t, g] : s.checkpoint_mean_gap) {
      series.push_back({{"t", t}, {"mean_gap", g}});
    }
    j["checkpoint_mean_gap"] = series;
  }
  return j;
}

Json result_json(const ExperimentResult& result) {
  Json j;
  j["config"] = to_json(result.config);
  j["summary"] = summary_json(result.summary);
  std::uint64_t violations = 0;
  for (const auto& run : result.runs) violations += run.adversary_violations;
  j["adversary_violations"] = violations;
  if (result.config.assertion) {
    j["assertion"] = {{"min_gap", result.config.assertion->min_gap},
                      {"min_fraction", result.config.assertion->min_fraction},
                      {"fraction", result.assertion_fraction.value_or(0.0)},
                      {"passed", result.assertion_passed}};
  }
  return j;
}

Json sweep_json(const std::vector<SweepRow>& rows) {
  Json out = Json::array();
  for (const auto& row : rows) {
    Json j;
    j["parameter"] = row.parameter;
    j["value"] = row.value;
    j["config_id"] = row.config_id;
    if (row.summary) j["summary"] = summary_json(*row.summary);
    if (!row.error.empty()) j["error"] = row.error;
    out.push_back(j);
  }
  return out;
}

Json verify_json(const std::vector<SuiteReport>& reports) {
  Json out = Json::array();
  for (const auto& rep : reports) {
    Json j;
    j["suite"] = rep.suite;
    j["negative_control"] = rep.negative_control;
    j["trials"] = rep.trials;
    j["applicable"] = rep.applicable;
    j["violations"] = rep.violations;
    j["worst_margin"] = rep.worst_margin;
    Json recs = Json::array();
    for (const auto& v : rep.records) {
      Json rj;
      rj["trial"] = v.trial;
      rj["lhs"] = v.lhs;
      rj["rhs"] = v.rhs;
      rj["note"] = v.note;
      if (v.offending_pair) {
        rj["offending_pair"] = {v.offending_pair->first,
                                v.offending_pair->second};
      }
      rj["y"] = v.y;
      rj["q"] = v.q;
      recs.push_back(rj);
    }
    j["records"] = recs;
    out.push_back(j);
  }
  return out;
}

}  // namespace nba
