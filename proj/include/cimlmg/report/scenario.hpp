#pragma once

// Scenario configuration: the sections of a config file mapped onto the
// parameter types of the analytic, metrology and SDE modules.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cimlmg/cim_mapping.hpp"
#include "cimlmg/dopo_sde.hpp"
#include "cimlmg/lmg_analytic.hpp"
#include "cimlmg/metrology.hpp"
#include "cimlmg/report/ini.hpp"

namespace cimlmg::report {

enum class Scenario { PhaseDiagram, Metrology, Sde, Validate };

inline std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::PhaseDiagram:
      return "phase-diagram";
    case Scenario::Metrology:
      return "metrology";
    case Scenario::Sde:
      return "sde";
    case Scenario::Validate:
      return "validate";
  }
  return "?";
}

struct Sweep {
  double start = 0.0;
  double stop = 1.0;
  int count = 2;

  double at(int i) const {
    if (count == 1) return start;
    return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  std::vector<double> values() const {
    std::vector<double> v;
    for (int i = 0; i < count; ++i) v.push_back(at(i));
    return v;
  }
};

struct RunSection {
  Scenario scenario = Scenario::PhaseDiagram;
  std::uint64_t seed = 0;
  std::string output = "out";
  unsigned threads = 0;
  bool plots = false;
};

struct PhaseSection {
  double lambda = 1.0;
  std::optional<Sweep> h;
  std::optional<Sweep> omega;  // absolute Omega; J from [cim]
};

struct SensingSection {
  std::vector<double> g{0.92, 0.94, 0.96};
  double omega = 1.0;
  double alpha = 1.0;
  metrology::Convention convention = metrology::Convention::Lmg;
  int peaks = 6;
  double t_end_periods = 6.5;  // in units of tau_1 of each g
  int points = 2001;
  std::optional<double> working_point;
  Sweep working_grid{0.5, 0.99, 50};
};

struct SdeSection {
  std::vector<sde::Model> models{sde::Model::FullThreeField, sde::Model::ReducedWithAuxNoise,
                                 sde::Model::ReducedSignalNoiseOnly};
  std::vector<double> pump_ratios{0.5, 1.0, 1.5, 3.0};
  double dt = 0.01;
  std::optional<double> dt_full;
  double t_end = 100.0;
  int n_trajectories = 200;
  int n_record = 201;
  double t_steady = 50.0;
  double initial_signal = 0.0;
  double noise_scale = 1.0;
  sde::Calculus calculus = sde::Calculus::Ito;
  sde::CouplingNoise coupling_noise = sde::CouplingNoise::Independent;
  int record_pulses = 1;
  int max_full_pulses = 128;
  bool dump = false;
  std::vector<double> coupling_matrix;  // row-major N x N; empty = uniform zeta

  /// Largest step <= 0.1/max(gamma_p, gamma_c) dividing dt evenly, so both
  /// step sizes share the record grid.
  double full_step(const cim::CimParams& p) const {
    if (dt_full) return *dt_full;
    const double limit = 0.1 / std::max(p.gamma_p, p.gamma_c);
    return dt / std::ceil(dt / limit - 1e-12);
  }

  sde::SdeConfig config_for(const cim::CimParams& p, double ratio, sde::Model m,
                            std::uint64_t seed) const {
    sde::SdeConfig c;
    c.cim = p;
    c.pump_ratio = ratio;
    c.model = m;
    c.dt = m == sde::Model::FullThreeField ? full_step(p) : dt;
    c.t_end = t_end;
    c.n_trajectories = n_trajectories;
    c.seed = seed;
    c.n_record = n_record;
    c.initial_signal = initial_signal;
    c.calculus = calculus;
    c.coupling_noise = coupling_noise;
    c.record_pulses = std::min(record_pulses, p.n_pulses);
    c.max_full_pulses = max_full_pulses;
    c.noise_scale = noise_scale;
    c.coupling_matrix = coupling_matrix;
    return c;
  }
};

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> s{"lmg", "cim", "metrology", "duality", "ed",
                                          "fock", "sde", "crb_closed_form"};
  return s;
}

inline const std::vector<std::string>& known_faults() {
  static const std::vector<std::string> f{"none", "qfi_prefactor", "var_p_offset", "gap_scale"};
  return f;
}

struct ValidateSection {
  std::vector<std::string> suites{"lmg", "cim", "metrology", "duality", "ed", "fock", "sde"};
  std::string inject_fault = "none";
};

struct ScenarioConfig {
  RunSection run;
  PhaseSection phase;
  cim::CimParams cim;
  SensingSection sensing;
  SdeSection sde;
  ValidateSection validate;
  std::string text;  // verbatim config, recorded in the manifest
};

namespace detail {

inline Sweep read_sweep(const IniSection& s) {
  Sweep w;
  w.start = s.get_double("start", w.start);
  w.stop = s.get_double("stop", w.stop);
  const auto count = s.get_int("count", 101);
  if (count < 1 || count > 10'000'000) throw ValidationError(s.field("count"), "must be in [1, 1e7]");
  w.count = static_cast<int>(count);
  if (!std::isfinite(w.start) || !std::isfinite(w.stop)) {
    throw ValidationError(s.field("start"), "sweep bounds must be finite");
  }
  return w;
}

inline int read_positive_int(const IniSection& s, std::string_view key, int fallback, int max = 1 << 30) {
  const auto v = s.get_int(key, fallback);
  if (v < 1 || v > max) {
    throw ValidationError(s.field(key), "must be an integer in [1, " + std::to_string(max) + "]");
  }
  return static_cast<int>(v);
}

inline double read_positive(const IniSection& s, std::string_view key, double fallback) {
  const double v = s.get_double(key, fallback);
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(s.field(key), "must be > 0");
  return v;
}

}  // namespace detail

/// Builds a ScenarioConfig; unknown sections or keys and out-of-range values
/// raise ValidationError naming the field.
inline ScenarioConfig parse_scenario(const IniDocument& doc, std::string text = {}) {
  static const std::set<std::string, std::less<>> kSections{"run",    "lmg",    "cim",        "sensing",
                                                            "sde",    "sweep.h", "sweep.omega", "sweep.g",
                                                            "validate"};
  for (const auto& s : doc.sections()) {
    if (!kSections.count(s.name())) {
      throw ValidationError(s.name(), "unknown section [" + s.name() + "]");
    }
  }
  ScenarioConfig c;
  c.text = std::move(text);

  const auto& run = doc.section("run");
  const std::string scen = run.get_string("scenario", "phase-diagram");
  if (scen == "phase-diagram") {
    c.run.scenario = Scenario::PhaseDiagram;
  } else if (scen == "metrology") {
    c.run.scenario = Scenario::Metrology;
  } else if (scen == "sde") {
    c.run.scenario = Scenario::Sde;
  } else if (scen == "validate") {
    c.run.scenario = Scenario::Validate;
  } else {
    throw ValidationError(run.field("scenario"),
                          "expected phase-diagram, metrology, sde or validate, got '" + scen + "'");
  }
  c.run.seed = run.get_u64("seed").value_or(0);
  c.run.output = run.get_string("output", "out");
  if (c.run.output.empty()) throw ValidationError(run.field("output"), "must not be empty");
  const auto threads = run.get_int("threads", 0);
  if (threads < 0 || threads > 4096) throw ValidationError(run.field("threads"), "must be in [0, 4096]");
  c.run.threads = static_cast<unsigned>(threads);
  c.run.plots = run.get_bool("plots", false);

  const auto& lmg = doc.section("lmg");
  c.phase.lambda = lmg.get_double("lambda", 1.0);
  if (c.phase.lambda == 0.0 || !std::isfinite(c.phase.lambda)) {
    throw ValidationError(lmg.field("lambda"), "must be finite and non-zero");
  }
  if (const auto* s = doc.find("sweep.h")) c.phase.h = detail::read_sweep(*s);
  if (const auto* s = doc.find("sweep.omega")) c.phase.omega = detail::read_sweep(*s);

  const auto& cs = doc.section("cim");
  c.cim.delta = cs.get_double("delta", 0.0);
  c.cim.kappa = cs.get_double("kappa", 1.0);
  c.cim.epsilon = cs.get_double("epsilon", 0.0);
  c.cim.gamma_s = cs.get_double("gamma_s", 1.0);
  c.cim.gamma_p = cs.get_double("gamma_p", 1.0);
  c.cim.gamma_c = cs.get_double("gamma_c", 1.0);
  c.cim.zeta = cs.get_double("zeta", 0.0);
  c.cim.n_pulses = detail::read_positive_int(cs, "n_pulses", 1, 100000);
  try {
    c.cim.validate();
  } catch (const InvalidParameter& e) {
    throw ValidationError("cim", e.what());
  }

  const auto& sen = doc.section("sensing");
  if (sen.has("g")) c.sensing.g = sen.get_double_list("g");
  for (double g : c.sensing.g) {
    if (!(std::abs(g) < 1.0 - metrology::kCriticalGuard)) {
      throw ValidationError(sen.field("g"), "|g| must be below 1 - 1e-6");
    }
  }
  c.sensing.omega = detail::read_positive(sen, "omega", 1.0);
  c.sensing.alpha = sen.get_double("alpha", 1.0);
  if (!(c.sensing.alpha >= 0.0)) throw ValidationError(sen.field("alpha"), "must be >= 0");
  const std::string conv = sen.get_string("convention", "lmg");
  if (conv == "lmg") {
    c.sensing.convention = metrology::Convention::Lmg;
  } else if (conv == "cim") {
    c.sensing.convention = metrology::Convention::Cim;
  } else {
    throw ValidationError(sen.field("convention"), "expected lmg or cim");
  }
  c.sensing.peaks = detail::read_positive_int(sen, "peaks", 6, 1000);
  c.sensing.t_end_periods = detail::read_positive(sen, "t_end_periods", 6.5);
  c.sensing.points = detail::read_positive_int(sen, "points", 2001, 10'000'000);
  if (c.sensing.points < 2) throw ValidationError(sen.field("points"), "must be >= 2");
  c.sensing.working_point = sen.get_double("working_point");
  if (c.sensing.working_point && !(std::abs(*c.sensing.working_point) < 1.0)) {
    throw ValidationError(sen.field("working_point"), "|g_o| must be < 1");
  }
  if (const auto* s = doc.find("sweep.g")) {
    c.sensing.working_grid = detail::read_sweep(*s);
    for (double g : c.sensing.working_grid.values()) {
      if (!(std::abs(g) < 1.0 - metrology::kCriticalGuard)) {
        throw ValidationError("sweep.g", "every g must satisfy |g| < 1 - 1e-6");
      }
    }
  }

  const auto& sd = doc.section("sde");
  if (sd.has("model")) {
    c.sde.models.clear();
    for (const auto& m : sd.get_list("model")) {
      try {
        c.sde.models.push_back(sde::parse_model(m));
      } catch (const InvalidParameter&) {
        throw ValidationError(sd.field("model"),
                              "unknown model '" + m + "' (full, reduced_aux, reduced_signal, deterministic)");
      }
    }
  }
  if (sd.has("pump_ratio")) c.sde.pump_ratios = sd.get_double_list("pump_ratio");
  for (double r : c.sde.pump_ratios) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw ValidationError(sd.field("pump_ratio"), "must be >= 0");
  }
  c.sde.dt = detail::read_positive(sd, "dt", 0.01);
  if (sd.has("dt_full")) c.sde.dt_full = detail::read_positive(sd, "dt_full", 0.0);
  c.sde.t_end = detail::read_positive(sd, "t_end", 100.0);
  c.sde.n_trajectories = detail::read_positive_int(sd, "n_trajectories", 200, 10'000'000);
  c.sde.n_record = detail::read_positive_int(sd, "n_record", 201, 10'000'000);
  c.sde.t_steady = sd.get_double("t_steady", c.sde.t_end / 2.0);
  if (!(c.sde.t_steady >= 0.0 && c.sde.t_steady <= c.sde.t_end)) {
    throw ValidationError(sd.field("t_steady"), "must lie in [0, t_end]");
  }
  c.sde.initial_signal = sd.get_double("initial_signal", 0.0);
  c.sde.noise_scale = sd.get_double("noise_scale", 1.0);
  if (!(c.sde.noise_scale >= 0.0)) throw ValidationError(sd.field("noise_scale"), "must be >= 0");
  const std::string calc = sd.get_string("calculus", "ito");
  if (calc == "ito") {
    c.sde.calculus = sde::Calculus::Ito;
  } else if (calc == "stratonovich") {
    c.sde.calculus = sde::Calculus::Stratonovich;
  } else {
    throw ValidationError(sd.field("calculus"), "expected ito or stratonovich");
  }
  const std::string cn = sd.get_string("coupling_noise", "independent");
  if (cn == "independent") {
    c.sde.coupling_noise = sde::CouplingNoise::Independent;
  } else if (cn == "correlated") {
    c.sde.coupling_noise = sde::CouplingNoise::Correlated;
  } else {
    throw ValidationError(sd.field("coupling_noise"), "expected independent or correlated");
  }
  c.sde.record_pulses = static_cast<int>(sd.get_int("record_pulses", 1));
  if (c.sde.record_pulses < 0) throw ValidationError(sd.field("record_pulses"), "must be >= 0");
  c.sde.max_full_pulses = detail::read_positive_int(sd, "max_full_pulses", 128, 100000);
  c.sde.dump = sd.get_bool("dump", false);
  if (sd.has("coupling_matrix")) c.sde.coupling_matrix = sd.get_double_list("coupling_matrix");

  const auto& va = doc.section("validate");
  if (va.has("suites")) {
    c.validate.suites = va.get_list("suites");
    for (const auto& s : c.validate.suites) {
      const auto& k = known_suites();
      if (std::find(k.begin(), k.end(), s) == k.end()) {
        throw ValidationError(va.field("suites"), "unknown suite '" + s + "'");
      }
    }
  }
  c.validate.inject_fault = va.get_string("inject_fault", "none");
  {
    const auto& f = known_faults();
    if (std::find(f.begin(), f.end(), c.validate.inject_fault) == f.end()) {
      throw ValidationError(va.field("inject_fault"), "unknown fault '" + c.validate.inject_fault + "'");
    }
  }

  for (const auto& s : doc.sections()) {
    for (const auto* e : s.unused()) {
      throw ValidationError(s.field(e->key), "unknown key (line " + std::to_string(e->line) + ")");
    }
  }

  // Scenario-specific requirements.
  if (c.run.scenario == Scenario::PhaseDiagram && !c.phase.h && !c.phase.omega) {
    throw ValidationError("sweep.h", "phase-diagram needs [sweep.h] and/or [sweep.omega]");
  }
  if (c.run.scenario == Scenario::Sde) {
    if (c.sde.models.empty()) throw ValidationError("sde.model", "at least one model is required");
    if (c.sde.pump_ratios.empty()) throw ValidationError("sde.pump_ratio", "at least one ratio is required");
    for (auto m : c.sde.models) {
      try {
        c.sde.config_for(c.cim, c.sde.pump_ratios.front(), m, c.run.seed).validate();
      } catch (const Error& e) {
        throw ValidationError("sde", e.what());
      }
    }
  }
  return c;
}

inline ScenarioConfig parse_scenario_text(std::string text) {
  const auto doc = IniDocument::parse(text);
  return parse_scenario(doc, std::move(text));
}

}  // namespace cimlmg::report
