#pragma once

// Scenario execution. Every output is rendered in memory first and written
// once by the coordinator, followed by manifest.json listing each file with its
// SHA-256.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cimlmg/cim_mapping.hpp"
#include "cimlmg/dopo_sde.hpp"
#include "cimlmg/lmg_analytic.hpp"
#include "cimlmg/metrology.hpp"
#include "cimlmg/report/csv.hpp"
#include "cimlmg/report/hash.hpp"
#include "cimlmg/report/scenario.hpp"
#include "cimlmg/report/svg.hpp"
#include "cimlmg/report/validate.hpp"
#include "cimlmg/sde_dump.hpp"

#ifndef CIMLMG_VERSION
#define CIMLMG_VERSION "0.0.0"
#endif

namespace cimlmg::report {

inline constexpr std::string_view kToolName = "cimlmg";
inline constexpr std::string_view kOutDirEnv = "CIMLMG_OUT_DIR";

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;
};

struct OutputFile {
  std::string name;
  std::string sha256;
  std::uint64_t bytes = 0;
};

struct RunManifest {
  std::string tool{kToolName};
  std::string version{CIMLMG_VERSION};
  std::string scenario;
  std::string config_path;
  std::string config;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string output_dir;
  std::vector<OutputFile> outputs;
  double duration_s = 0.0;
  std::optional<bool> validation_passed;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = tool;
    j["version"] = version;
    j["scenario"] = scenario;
    j["config_path"] = config_path;
    j["config"] = config;
    j["seed"] = seed;
    j["threads"] = threads;
    j["output_dir"] = output_dir;
    auto files = nlohmann::ordered_json::array();
    for (const auto& f : outputs) files.push_back({{"file", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    j["outputs"] = std::move(files);
    j["duration_s"] = duration_s;
    if (validation_passed) j["validation_passed"] = *validation_passed;
    return j;
  }

  static RunManifest from_json(const nlohmann::json& j) {
    RunManifest m;
    try {
      m.tool = j.at("tool").get<std::string>();
      if (m.tool != kToolName) throw SchemaError("manifest: written by '" + m.tool + "'");
      m.version = j.at("version").get<std::string>();
      m.scenario = j.at("scenario").get<std::string>();
      m.config_path = j.value("config_path", std::string{});
      m.config = j.at("config").get<std::string>();
      m.seed = j.at("seed").get<std::uint64_t>();
      m.threads = j.value("threads", 0u);
      m.output_dir = j.value("output_dir", std::string{});
      for (const auto& f : j.at("outputs")) {
        m.outputs.push_back({f.at("file").get<std::string>(), f.at("sha256").get<std::string>(),
                             f.at("bytes").get<std::uint64_t>()});
      }
      m.duration_s = j.value("duration_s", 0.0);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(std::string("manifest: ") + e.what());
    }
    return m;
  }
};

/// Rendered outputs in emission order.
class OutputSet {
 public:
  void add(std::string name, std::string content) {
    for (const auto& f : files_) {
      if (f.first == name) throw IoError("duplicate output name " + name);
    }
    files_.emplace_back(std::move(name), std::move(content));
  }
  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

namespace detail {

inline void maybe_plot(OutputSet& out, bool plots, const std::string& csv_name, const std::string& csv,
                       const std::string& spec) {
  if (!plots) return;
  const auto stem = csv_name.substr(0, csv_name.rfind('.'));
  out.add(stem + ".svg", render_svg(CsvTable::parse(csv), parse_plot_spec(spec)));
}

inline void run_phase_diagram(const ScenarioConfig& c, OutputSet& out) {
  if (c.phase.h) {
    CsvWriter csv(schema::kPhase);
    for (double h : c.phase.h->values()) {
      const lmg::LmgParams p{c.phase.lambda, h, std::nullopt};
      const auto s = lmg::summarize(p);
      const auto d = lmg::energy_density_derivatives(p);
      csv.row() << h << s.e_g << d.first << d.second << s.gap;
      // At the critical point a second row carries the symmetry-broken limits.
      if (d.deformed_limit) csv.row() << h << s.e_g << d.deformed_limit->first << d.deformed_limit->second << s.gap;
    }
    const std::string text = csv.str();
    out.add("phase.csv", text);
    maybe_plot(out, c.run.plots, "phase.csv", text,
               "x=h;y=e_g,de_dh,d2e_dh2;title=ground-state energy and derivatives;xlabel=h/h_c");
  }
  if (c.phase.omega) {
    const double J = cim::coupling_strength(c.cim);
    if (!(J > 0.0)) throw ValidationError("cim.zeta", "CIM phase diagram needs J = N zeta^2/gamma_c > 0");
    CsvWriter csv(schema::kCimPhase);
    for (double w : c.phase.omega->values()) {
      const auto d = cim::cim_energy_density_derivatives(J, w);
      const double e = cim::cim_ground_energy_density(J, w);
      const double gap = cim::cim_excitation_gap(J, w);
      csv.row() << w << e << d.first << d.second << gap;
      if (d.deformed_limit) csv.row() << w << e << d.deformed_limit->first << d.deformed_limit->second << gap;
    }
    const std::string text = csv.str();
    out.add("cim_phase.csv", text);
    maybe_plot(out, c.run.plots, "cim_phase.csv", text,
               "x=omega;y=e_g,de_domega,d2e_domega2;title=CIM ground-state energy;xlabel=Omega");
  }
}

inline void run_metrology(const ScenarioConfig& c, OutputSet& out) {
  const auto& s = c.sensing;
  CsvWriter peaks(schema::kPeaks);
  for (double g : s.g) {
    const metrology::SensingConfig cfg{g, s.omega, s.alpha, s.convention};
    const metrology::Sensor sensor(cfg);
    const double t_end = s.t_end_periods * sensor.tau(1);
    std::vector<double> times(static_cast<std::size_t>(s.points));
    for (int k = 0; k < s.points; ++k) times[k] = t_end * k / (s.points - 1);
    const auto curve = metrology::metrology_curve(cfg, times);
    CsvWriter csv(schema::kMetrology);
    for (std::size_t i = 0; i < curve.size(); ++i) {
      const auto p = curve.at(i);
      csv.row() << p.t << p.qfi << p.mean_p << p.var_p << p.chi << p.inv_var;
    }
    const std::string name = "metrology_g" + format_short(g) + ".csv";
    const std::string text = csv.str();
    out.add(name, text);
    maybe_plot(out, c.run.plots, name, text,
               "x=t;y=qfi,inv_var;logy=true;title=QFI and inverted variance, g=" + format_short(g));
    for (int n = 1; n <= s.peaks; ++n) {
      const double qp = sensor.qfi_at_peak(n);
      const double fp = sensor.inverted_variance_peak(n);
      peaks.row() << g << n << sensor.tau(n) << qp << fp << fp / qp << sensor.susceptibility_peak_magnitude(n);
    }
  }
  out.add("peaks.csv", peaks.str());
  if (s.working_point) {
    CsvWriter csv(schema::kWorkingPoint);
    const auto grid = s.working_grid.values();
    for (const auto& [g, p] : metrology::working_point_scan(*s.working_point, grid, s.omega, s.alpha)) {
      csv.row() << g << p;
    }
    out.add("working_point.csv", csv.str());
  }
}

inline void run_sde(const ScenarioConfig& c, std::uint64_t seed, unsigned threads, OutputSet& out) {
  const auto& s = c.sde;
  CsvWriter cmp(schema::kSdeComparison);
  for (double ratio : s.pump_ratios) {
    std::vector<sde::SdeConfig> cfgs;
    for (auto m : s.models) cfgs.push_back(s.config_for(c.cim, ratio, m, seed));
    std::vector<sde::PhotonStats> stats;
    CsvWriter csv(schema::kSde);
    const std::string tag = "sde_r" + format_short(ratio);
    for (const auto& cfg : cfgs) {
      const auto ens = sde::simulate(cfg, threads);
      if (s.dump) {
        std::ostringstream bin(std::ios::binary);
        sde::write_dump(bin, ens);
        out.add(tag + "_" + std::string(sde::to_string(cfg.model)) + ".bin", bin.str());
      }
      stats.push_back(sde::photon_stats(ens));
      const auto& st = stats.back();
      for (std::size_t k = 0; k < st.times.size(); ++k) {
        csv.row() << st.times[k] << st.mean[k] << st.stderr_[k] << sde::to_string(cfg.model);
      }
    }
    const auto comparison = sde::compare_stats(stats, s.models, s.t_steady);
    const double n_inf = sde::steady_state_prediction(c.cim, ratio);
    for (std::size_t m = 0; m < s.models.size(); ++m) {
      double se = 0.0;
      std::size_t cnt = 0;
      for (std::size_t k = 0; k < comparison.times.size(); ++k) {
        if (comparison.times[k] >= s.t_steady) {
          se += comparison.stderr_[m][k];
          ++cnt;
        }
      }
      cmp.row() << ratio << sde::to_string(s.models[m]) << comparison.steady[m] << se / static_cast<double>(cnt)
                << n_inf << comparison.steady_rel_diff[m] << comparison.max_rel_diff[m];
    }
    const std::string name = tag + ".csv";
    const std::string text = csv.str();
    out.add(name, text);
    maybe_plot(out, c.run.plots, name, text,
               "x=t;y=mean_ns;group=model;title=signal photon number, eps/eps_th=" + format_short(ratio));
  }
  out.add("sde_comparison.csv", cmp.str());
}

inline std::filesystem::path resolve_out_dir(const ScenarioConfig& c, const RunOptions& o) {
  if (o.out_dir) return *o.out_dir;
  std::filesystem::path p(c.run.output);
  if (p.is_absolute()) return p;
  if (const char* root = std::getenv(std::string(kOutDirEnv).c_str()); root && *root) {
    return std::filesystem::path(root) / p;
  }
  return p;
}

inline void write_outputs(const std::filesystem::path& dir, const OutputSet& out, RunManifest& m) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  for (const auto& [name, content] : out.files()) {
    const auto path = dir / name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write " + path.string());
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw IoError("write failed for " + path.string());
    m.outputs.push_back({name, sha256_hex(content), content.size()});
  }
}

}  // namespace detail

struct RunResult {
  RunManifest manifest;
  std::optional<ValidationReport> validation;
};

/// Executes one scenario. `force_validate` runs the [validate] suites whatever
/// the [run] scenario says (the `validate` command).
inline RunResult run_scenario(const ScenarioConfig& c, const RunOptions& o, const std::string& config_path = {},
                              bool force_validate = false) {
  const auto start = std::chrono::steady_clock::now();
  RunResult res;
  auto& m = res.manifest;
  m.seed = o.seed.value_or(c.run.seed);
  m.threads = o.threads.value_or(c.run.threads);
  m.config = c.text;
  m.config_path = config_path;
  const Scenario scen = force_validate ? Scenario::Validate : c.run.scenario;
  m.scenario = std::string(to_string(scen));

  OutputSet out;
  switch (scen) {
    case Scenario::PhaseDiagram:
      detail::run_phase_diagram(c, out);
      break;
    case Scenario::Metrology:
      detail::run_metrology(c, out);
      break;
    case Scenario::Sde:
      detail::run_sde(c, m.seed, m.threads, out);
      break;
    case Scenario::Validate: {
      auto report = run_validation(c.validate, m.seed, m.threads);
      out.add("validation.json", report.to_json().dump(2) + "\n");
      if (!report.convergence_csv.empty()) out.add("n_convergence.csv", report.convergence_csv);
      m.validation_passed = report.passed();
      res.validation = std::move(report);
      break;
    }
  }
  const auto dir = detail::resolve_out_dir(c, o);
  m.output_dir = dir.string();
  detail::write_outputs(dir, out, m);
  m.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ofstream mf(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!mf) throw IoError("cannot write manifest in " + dir.string());
  mf << m.to_json().dump(2) << '\n';
  return res;
}

inline bool looks_like_manifest(const std::string& path, const std::string& text) {
  if (std::filesystem::path(path).extension() == ".json") return true;
  const auto first = text.find_first_not_of(" \t\r\n");
  return first != std::string::npos && text[first] == '{';
}

/// `run` entry point: a config file, or a manifest.json from an earlier run
/// whose recorded config and seed are replayed.
inline RunResult run_path(const std::string& path, RunOptions o, bool force_validate = false) {
  const std::string text = read_file(path);
  if (looks_like_manifest(path, text)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError("manifest " + path + ": " + e.what());
    }
    const auto prev = RunManifest::from_json(j);
    if (!o.seed) o.seed = prev.seed;
    const auto cfg = parse_scenario_text(prev.config);
    const bool validate = force_validate || prev.scenario == "validate";
    return run_scenario(cfg, o, prev.config_path, validate && cfg.run.scenario != Scenario::Validate);
  }
  return run_scenario(parse_scenario_text(text), o, path, force_validate);
}

}  // namespace cimlmg::report
