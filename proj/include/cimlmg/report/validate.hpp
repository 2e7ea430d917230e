#pragma once

// Invariant suites behind `cimlmg validate`. Each check reports a measured
// deviation and the tolerance it was held to.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cimlmg/cim_mapping.hpp"
#include "cimlmg/dopo_sde.hpp"
#include "cimlmg/ed_oracle.hpp"
#include "cimlmg/lmg_analytic.hpp"
#include "cimlmg/metrology.hpp"
#include "cimlmg/parallel.hpp"
#include "cimlmg/report/csv.hpp"
#include "cimlmg/report/scenario.hpp"

namespace cimlmg::report {

struct CheckResult {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  std::string convergence_csv;  // n_spins,h,... when the ed suite ran

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks) {
      if (!c.passed) out.push_back(c.name);
    }
    return out;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["passed"] = passed();
    j["failures"] = failures();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
      nlohmann::ordered_json e;
      e["suite"] = c.suite;
      e["name"] = c.name;
      e["passed"] = c.passed;
      e["measured"] = c.measured;
      e["tolerance"] = c.tolerance;
      if (!c.detail.empty()) e["detail"] = c.detail;
      arr.push_back(std::move(e));
    }
    j["checks"] = std::move(arr);
    return j;
  }
};

namespace detail {

/// measured <= tolerance passes; a non-finite measurement fails.
inline CheckResult bound_check(std::string suite, std::string name, double measured, double tol,
                               std::string detail = {}) {
  return {std::move(suite), std::move(name), measured, tol, std::isfinite(measured) && measured <= tol,
          std::move(detail)};
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline void lmg_suite(ValidationReport& r) {
  const double step = 1e-4;
  double worst = 0.0;
  for (double h : {0.25, 0.5, 0.75, 1.25, 1.5, 1.75}) {
    auto e = [](double x) { return lmg::ground_energy_density({1.0, x, std::nullopt}); };
    const double expect = h < 1.0 ? -1.0 : 0.0;
    worst = std::max(worst, std::abs(lmg::numerical_derivative(e, h, step, 2) - expect));
  }
  r.checks.push_back(bound_check("lmg", "lmg.second_derivative_jump", worst, 1e-6,
                                 "finite-difference d2e/dh2 vs -1 (h<1) and 0 (h>1), lambda=1"));
  double sym = 0.0;
  for (double h = -2.0; h <= 2.0; h += 0.125) {
    for (double lam : {0.5, 1.0, 2.0}) {
      const double e = lmg::ground_energy_density({lam, h, std::nullopt});
      sym = std::max({sym, std::abs(e - lmg::ground_energy_density({-lam, h, std::nullopt})),
                      std::abs(e - lmg::ground_energy_density({lam, -h, std::nullopt}))});
    }
  }
  r.checks.push_back(bound_check("lmg", "lmg.sign_symmetry", sym, 0.0,
                                 "e_g invariant under lambda -> -lambda and h -> -h"));
}

inline void cim_suite(ValidationReport& r) {
  const double J = 1.0, step = 1e-4;
  double worst = 0.0;
  for (double w : {-1.75, -1.5, -0.5, -0.25, 0.25, 0.5, 1.5, 1.75}) {
    auto e = [&](double x) { return cim::cim_ground_energy_density(J, x); };
    const double expect = std::abs(w) < J ? -1.0 / (2.0 * J) : 0.0;
    worst = std::max(worst, std::abs(lmg::numerical_derivative(e, w, step, 2) - expect));
  }
  r.checks.push_back(bound_check("cim", "cim.second_derivative_jump", worst, 1e-6,
                                 "d2e/dOmega2 vs -1/(2J) inside |Omega|<J and 0 outside"));
  double id = 0.0;
  for (double w = -2.0; w <= 2.0; w += 0.05) {
    const double a = cim::cim_ground_energy_density(J, w);
    const double b = lmg::ground_energy_density({-J / 2.0, w / 2.0, std::nullopt});
    id = std::max(id, std::abs(a - b));
  }
  r.checks.push_back(bound_check("cim", "cim.lmg_identity", id, 1e-15,
                                 "e_cim(J, Omega) = e_lmg(lambda=-J/2, h=Omega/2)"));
}

inline void metrology_suite(ValidationReport& r, const std::string& fault) {
  double qfi = 0.0, var = 0.0, chi = 0.0, inv = 0.0, ratio = 0.0;
  for (double g : {0.92, 0.94, 0.96}) {
    const metrology::Sensor s({g, 1.0, 1.0, metrology::Convention::Lmg});
    for (int n = 1; n <= 6; ++n) {
      const double t = s.tau(n);
      double peak = s.qfi_at_peak(n);
      if (fault == "qfi_prefactor") peak *= 1.0 + 1e-6;
      qfi = std::max(qfi, rel_err(s.qfi(t), peak));
      double vp = s.var_p(t);
      if (fault == "var_p_offset") vp += 1e-9;
      var = std::max(var, std::abs(vp - 0.5));
      chi = std::max(chi, rel_err(std::abs(s.susceptibility(t)), s.susceptibility_peak_magnitude(n)));
      inv = std::max(inv, rel_err(s.inverted_variance(t), s.inverted_variance_peak(n)));
      ratio = std::max(ratio, rel_err(s.inverted_variance_peak(n) / peak, 4.0 * g * g / s.var_x2()));
    }
  }
  r.checks.push_back(bound_check("metrology", "metrology.qfi_peak", qfi, 1e-10, "qfi(tau_n) vs qfi_at_peak"));
  r.checks.push_back(bound_check("metrology", "metrology.var_p_peak", var, 1e-12, "var_p(tau_n) = 1/2"));
  r.checks.push_back(bound_check("metrology", "metrology.chi_peak", chi, 1e-10, "|chi(tau_n)| closed form"));
  r.checks.push_back(bound_check("metrology", "metrology.inv_var_peak", inv, 1e-10, "F(tau_n) closed form"));
  r.checks.push_back(bound_check("metrology", "metrology.peak_ratio", ratio, 1e-10,
                                 "F/I at tau_n = 4 alpha^2 g^2 / Var[X^2]"));
}

inline void duality_suite(ValidationReport& r) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double gt = -0.95 + 1.9 * i / 99.0;
    const metrology::Sensor c({gt, 1.0, 1.0, metrology::Convention::Cim});
    const metrology::Sensor l({-gt, 1.0, 1.0, metrology::Convention::Lmg});
    for (double t : {0.3, 1.7, c.tau(1), 0.5 * c.tau(3)}) {
      worst = std::max({worst, rel_err(c.qfi(t), l.qfi(t)), rel_err(c.mean_p(t), l.mean_p(t)),
                        rel_err(c.var_p(t), l.var_p(t)), rel_err(c.inverted_variance(t), l.inverted_variance(t)),
                        rel_err(std::abs(c.susceptibility(t)), std::abs(l.susceptibility(t)))});
    }
  }
  r.checks.push_back(bound_check("duality", "duality.cim_vs_lmg", worst, 1e-12,
                                 "CIM outputs at g~ vs LMG outputs at g=-g~, 100-point grid"));
}

inline void ed_suite(ValidationReport& r, unsigned threads, const std::string& fault) {
  {
    const auto ops = ed::DickeOperators::build(100);
    const double jj = ops.j * (ops.j + 1.0);
    const ed::CMatrix cas = ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz;
    const double c = (cas - jj * ed::CMatrix::Identity(101, 101)).cwiseAbs().maxCoeff() / jj;
    const ed::CMatrix comm = ops.sx * ops.sy - ops.sy * ops.sx - ed::Complex(0, 1) * ops.sz;
    r.checks.push_back(bound_check("ed", "ed.casimir", c, 1e-10, "S^2 = j(j+1), N=100 (relative)"));
    r.checks.push_back(bound_check("ed", "ed.su2", comm.cwiseAbs().maxCoeff(), 1e-10, "[Sx,Sy] = i Sz, N=100"));
    const ed::CMatrix h = ed::lmg_hamiltonian_matrix({1.0, 0.7, 100});
    const ed::CMatrix p = ed::spin_parity(100);
    r.checks.push_back(bound_check("ed", "ed.parity", (h * p - p * h).cwiseAbs().maxCoeff(), 1e-10,
                                   "[H, exp(i pi (Sz + N/2))] = 0"));
  }
  const std::vector<int> ns{50, 100, 200};
  std::vector<double> hs;
  for (int k = 0; k <= 10; ++k) {
    const double h = 0.2 * k;
    if (std::abs(h - 1.0) >= 0.1) hs.push_back(h);
  }
  std::vector<double> err(ns.size() * hs.size()), e0(err.size());
  parallel_for(err.size(), threads, [&](std::size_t idx) {
    const int n = ns[idx / hs.size()];
    const double h = hs[idx % hs.size()];
    const auto gs = ed::ground_state(ed::lmg_hamiltonian_matrix({1.0, h, n}));
    e0[idx] = gs.energy / n;
    err[idx] = std::abs(e0[idx] - lmg::ground_energy_density({1.0, h, std::nullopt}));
  });
  CsvWriter csv(schema::kConvergence);
  double worst200 = 0.0;
  int non_monotone = 0;
  for (std::size_t a = 0; a < ns.size(); ++a) {
    for (std::size_t b = 0; b < hs.size(); ++b) {
      const std::size_t idx = a * hs.size() + b;
      csv.row() << ns[a] << hs[b] << e0[idx] << lmg::ground_energy_density({1.0, hs[b], std::nullopt}) << err[idx];
      if (ns[a] == 200) worst200 = std::max(worst200, err[idx]);
      if (a > 0 && !(err[idx] < err[idx - hs.size()])) ++non_monotone;
    }
  }
  r.convergence_csv = csv.str();
  r.checks.push_back(bound_check("ed", "ed.convergence_n200", worst200, 0.02,
                                 "max |E0/N - e_g|, N=200, lambda=1, |h-1|>=0.1"));
  r.checks.push_back(bound_check("ed", "ed.monotone_convergence", non_monotone, 0,
                                 "count of grid points where the error does not shrink over N=50,100,200"));
  double gap_err = 0.0;
  for (double h : {0.0, 0.5, 1.5, 2.0}) {
    const auto ev = ed::eigenvalues(ed::lmg_hamiltonian_matrix({1.0, h, 200}));
    // The symmetry-broken ground state is a near-degenerate doublet.
    const double ed_gap = h < 1.0 ? ev(2) - ev(0) : ev(1) - ev(0);
    double formula = lmg::excitation_gap({1.0, h, std::nullopt});
    if (fault == "gap_scale") formula *= 1.1;
    gap_err = std::max(gap_err, rel_err(formula, ed_gap));
  }
  r.checks.push_back(bound_check("ed", "ed.excitation_gap", gap_err, 0.03,
                                 "Bogoliubov gap vs ED at N=200 (relative)"));
}

inline void fock_suite(ValidationReport& r) {
  const double g = 0.5, omega = 1.0, alpha = 1.0;
  const metrology::Sensor s({g, omega, alpha, metrology::Convention::Lmg});
  std::vector<double> times;
  for (int k = 0; k <= 40; ++k) times.push_back(s.tau(2) * k / 40.0);
  const int cutoff = ed::choose_cutoff(alpha, g, omega, times);
  const auto ops = ed::FockOperators::build(cutoff);
  const ed::Propagator<ed::RMatrix> prop(ed::bosonic_hamiltonian(omega, g, cutoff));
  const auto psi0 = ed::coherent_state(alpha, cutoff);
  double worst = 0.0;
  for (double t : times) {
    const auto m = ed::quadrature_moments(ops, prop.evolve(psi0, t));
    worst = std::max({worst, std::abs(m.mean_p - s.mean_p(t)), std::abs(m.var_p - s.var_p(t))});
  }
  r.checks.push_back(bound_check("fock", "fock.moments", worst, 1e-6,
                                 "truncated-Fock <P>, Var P vs closed forms, g=0.5, t in [0, tau_2], cutoff " +
                                     std::to_string(cutoff)));
  const metrology::Sensor s9({0.9, omega, alpha, metrology::Convention::Lmg});
  const double t1 = s9.tau(1);
  const auto q = ed::numeric_qfi_checked(0.9, omega, alpha, t1, 300);
  const double ratio = q.value / s9.qfi(t1);
  r.checks.push_back(bound_check("fock", "fock.numeric_qfi_factor2", std::max(ratio, 1.0 / ratio), 2.0,
                                 "numeric/closed-form QFI at g=0.9, t=tau_1 is " + format_double(ratio)));
  double crb = 0.0;
  for (int k = 1; k <= 8; ++k) {
    const double t = s.tau(2) * k / 8.0;
    crb = std::max(crb, s.inverted_variance(t) / ed::numeric_qfi(g, omega, alpha, t, 120));
  }
  r.checks.push_back(bound_check("fock", "fock.cramer_rao_numeric", crb, 1.0 + 1e-6,
                                 "max F(t) / numeric QFI(t), g=0.5, t in (0, tau_2]"));
}

inline void sde_suite(ValidationReport& r, std::uint64_t seed, unsigned threads) {
  cim::CimParams p;
  p.gamma_s = 0.1;
  p.gamma_p = 20.0;
  p.gamma_c = 30.0;
  p.kappa = 0.14;
  sde::SdeConfig c;
  c.cim = p;
  c.pump_ratio = 3.0;
  c.model = sde::Model::Deterministic;
  c.initial_signal = 1.0;
  c.dt = 0.01;
  c.t_end = 100.0;
  c.n_record = 201;
  c.seed = seed;
  const double n_inf = sde::steady_state_prediction(p, 3.0);
  const double det = sde::photon_stats(sde::simulate(c, threads)).mean.back();
  r.checks.push_back(bound_check("sde", "sde.deterministic_fixed_point", rel_err(det, n_inf), 1e-3,
                                 "reduced drift at eps=3 eps_th vs n_inf"));
  c.model = sde::Model::ReducedSignalNoiseOnly;
  c.initial_signal = 0.0;
  c.n_trajectories = 100;
  const double stoch = sde::steady_mean(sde::photon_stats(sde::simulate(c, threads)), 50.0);
  r.checks.push_back(bound_check("sde", "sde.stochastic_mean", rel_err(stoch, n_inf), 0.05,
                                 "100-trajectory mean after 5/gamma_s vs n_inf"));
  c.pump_ratio = 0.5;
  const double below = sde::steady_mean(sde::photon_stats(sde::simulate(c, threads)), 50.0);
  r.checks.push_back(bound_check("sde", "sde.below_threshold", below / n_inf, 0.05,
                                 "mean n_s at eps=0.5 eps_th relative to n_inf(3 eps_th)"));
}

/// F(t) <= closed-form QFI on a dense grid. The closed form is the near-critical
/// approximation and is known to undershoot F at short times, so this suite is
/// opt-in; the numeric bound lives in the fock suite.
inline void crb_closed_form_suite(ValidationReport& r) {
  double worst = 0.0;
  for (double g : {0.92, 0.94, 0.96}) {
    const metrology::Sensor s({g, 1.0, 1.0, metrology::Convention::Lmg});
    for (int k = 1; k <= 3000; ++k) {
      const double t = s.tau(3) * k / 3000.0;
      worst = std::max(worst, s.inverted_variance(t) / s.qfi(t));
    }
  }
  r.checks.push_back(bound_check("crb_closed_form", "crb.closed_form_all_t", worst, 1.0,
                                 "max F(t)/I(t) over (0, tau_3], closed-form I"));
}

}  // namespace detail

inline ValidationReport run_validation(const ValidateSection& v, std::uint64_t seed, unsigned threads) {
  ValidationReport r;
  auto on = [&](const char* s) { return std::find(v.suites.begin(), v.suites.end(), s) != v.suites.end(); };
  if (on("lmg")) detail::lmg_suite(r);
  if (on("cim")) detail::cim_suite(r);
  if (on("metrology")) detail::metrology_suite(r, v.inject_fault);
  if (on("duality")) detail::duality_suite(r);
  if (on("ed")) detail::ed_suite(r, threads, v.inject_fault);
  if (on("fock")) detail::fock_suite(r);
  if (on("sde")) detail::sde_suite(r, seed, threads);
  if (on("crb_closed_form")) detail::crb_closed_form_suite(r);
  return r;
}

}  // namespace cimlmg::report
