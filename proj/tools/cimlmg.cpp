// cimlmg: scenario runner for the LMG / CIM analytics, metrology curves and
// DOPO network simulations.
//
//   cimlmg run <config|manifest.json> [--seed N] [--out DIR] [--threads N]
//   cimlmg validate <config> [--seed N] [--out DIR] [--threads N]
//   cimlmg plot <csv> --spec <spec|file> [--out FILE]

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cimlmg/report/csv.hpp"
#include "cimlmg/report/ini.hpp"
#include "cimlmg/report/runner.hpp"
#include "cimlmg/report/svg.hpp"

namespace {

using namespace cimlmg;

int report_error(const std::exception& e) {
  std::cerr << "cimlmg: error: " << e.what() << '\n';
  return 2;
}

void print_summary(const report::RunResult& r) {
  const auto& m = r.manifest;
  std::cout << "scenario " << m.scenario << ", seed " << m.seed << ", " << m.outputs.size() << " file(s) in "
            << m.output_dir << '\n';
  for (const auto& f : m.outputs) std::cout << "  " << f.name << "  " << f.sha256 << '\n';
  if (r.validation) {
    for (const auto& c : r.validation->checks) {
      std::cout << (c.passed ? "  PASS " : "  FAIL ") << c.name << "  measured=" << report::format_short(c.measured)
                << " tol=" << report::format_short(c.tolerance) << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LMG / coherent Ising machine criticality toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CIMLMG_VERSION));

  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "master RNG seed (overrides the config)");
    sub->add_option("--out", out, "output directory (default: [run] output under $CIMLMG_OUT_DIR)");
    sub->add_option("--threads", threads, "worker threads; results do not depend on it (0 = all cores)");
  };

  std::string config;
  auto* run = app.add_subcommand("run", "execute the scenario of a config file or replay a manifest.json");
  run->add_option("config", config, "config file or manifest.json")->required()->check(CLI::ExistingFile);
  add_common(run);

  auto* validate = app.add_subcommand("validate", "run the invariant suites listed in [validate]");
  validate->add_option("config", config, "config file or manifest.json")->required()->check(CLI::ExistingFile);
  add_common(validate);

  std::string csv_path, spec, plot_out;
  auto* plot = app.add_subcommand("plot", "render a CSV as an SVG line plot");
  plot->add_option("csv", csv_path, "input CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("--spec", spec, "plot spec 'x=..;y=..;logy=true' or a file containing it")->required();
  plot->add_option("--out", plot_out, "output SVG (default: CSV path with .svg)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*plot) {
      const auto table = report::CsvTable::load(csv_path);
      const auto svg = report::render_svg(table, report::load_plot_spec(spec));
      if (plot_out.empty()) plot_out = std::filesystem::path(csv_path).replace_extension(".svg").string();
      std::ofstream os(plot_out, std::ios::binary | std::ios::trunc);
      if (!os || !(os << svg)) throw IoError("cannot write " + plot_out);
      std::cout << plot_out << '\n';
      return 0;
    }
    const report::RunOptions opts{seed, out, threads};
    const auto result = report::run_path(config, opts, validate->parsed());
    print_summary(result);
    if (result.validation && !result.validation->passed()) return 1;
    return 0;
  } catch (const report::ConfigError& e) {
    std::cerr << "cimlmg: error: " << config << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    return report_error(e);
  }
}
