#pragma once

// Criticality-enhanced sensing with the quadratic bosonic Hamiltonian
//   H = omega [a^dag a + (g/2)(a^2 + a^dag^2)]          (LMG convention)
//   H = Omega [a^dag a - (g~/2)(a^2 + a^dag^2)]         (CIM convention, g~ = -g)
// probed from a coherent state |alpha> (alpha real, displaced along X) by
// homodyne detection of P = (a - a^dag)/(i sqrt 2).
//
// The normal mode oscillates at sqrt(Lambda) omega / 2 with Lambda = 4(1 - g^2),
// so every quantity below is periodic in tau_1 = 2 pi / (sqrt(Lambda) omega).

#include <cmath>
#include <numbers>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "cimlmg/errors.hpp"

namespace cimlmg::metrology {

/// Distance from |g| = 1 below which evaluation is refused.
inline constexpr double kCriticalGuard = 1e-6;

enum class Convention { Lmg, Cim };

inline std::string_view to_string(Convention c) { return c == Convention::Lmg ? "lmg" : "cim"; }

/// g is the LMG ratio lambda/h, or g~ = J/Omega when convention == Cim;
/// omega is 2h (LMG) or Omega (CIM).
struct SensingConfig {
  double g = 0.0;
  double omega = 1.0;
  double alpha = 1.0;
  Convention convention = Convention::Lmg;

  void validate() const {
    if (!std::isfinite(g) || !std::isfinite(omega) || !std::isfinite(alpha)) {
      throw InvalidParameter("metrology: g, omega, alpha must be finite");
    }
    if (!(std::abs(g) < 1.0) || 1.0 - std::abs(g) < kCriticalGuard) {
      throw DomainError("metrology: |g| must stay at least 1e-6 below the critical value 1");
    }
    if (!(omega > 0.0)) throw InvalidParameter("metrology: omega must be > 0");
    if (alpha < 0.0) throw InvalidParameter("metrology: alpha must be >= 0");
  }

  /// The equivalent LMG-convention coupling.
  double lmg_g() const { return convention == Convention::Lmg ? g : -g; }
};

inline double lambda_g(double g) {
  if (!(std::abs(g) < 1.0)) throw DomainError("metrology: Lambda_g needs |g| < 1");
  return 4.0 * (1.0 - g * g);
}

inline double tau_n(double g, double omega, int n) {
  if (n < 1) throw InvalidParameter("metrology: tau_n needs n >= 1");
  if (!(omega > 0.0)) throw InvalidParameter("metrology: omega must be > 0");
  return 2.0 * static_cast<double>(n) * std::numbers::pi / (std::sqrt(lambda_g(g)) * omega);
}

/// Var[X^2] in a coherent state with real alpha: X = sqrt(2) alpha + X_vac with
/// Var X_vac = 1/2, <X_vac^3> = 0 and Var X_vac^2 = 1/2.
inline double var_x2_coherent(double alpha) {
  if (alpha < 0.0) throw InvalidParameter("metrology: alpha must be >= 0");
  return 4.0 * alpha * alpha + 0.5;
}

/// Evaluator for one sensing configuration; the derived symbols (eta, Lambda,
/// Var[X^2]) are computed once at construction.
class Sensor {
 public:
  explicit Sensor(const SensingConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    const double g = cfg_.g;
    lambda_ = lambda_g(g);
    sqrt_lambda_ = std::sqrt(lambda_);
    if (cfg_.convention == Convention::Lmg) {
      eta_ = 1.0 + 2.0 * g / (1.0 - g);
      qfi_prefactor_ = 16.0 * (1.0 + g) * (1.0 + g);
    } else {
      eta_ = 1.0 - 2.0 * g / (1.0 + g);
      qfi_prefactor_ = 16.0 * (1.0 - g) * (1.0 - g);
    }
    var_x2_ = var_x2_coherent(cfg_.alpha);
  }

  const SensingConfig& config() const { return cfg_; }
  double eta() const { return eta_; }
  double lambda() const { return lambda_; }
  double var_x2() const { return var_x2_; }
  /// Angular frequency of the QFI oscillation, sqrt(Lambda) omega.
  double frequency() const { return sqrt_lambda_ * cfg_.omega; }
  double tau(int n) const { return tau_n(cfg_.g, cfg_.omega, n); }

  /// Near-critical QFI 16(1+g)^2 [sin(x) - x]^2 Var[X^2] / Lambda^3, x = sqrt(Lambda) omega t.
  double qfi(double t) const {
    require_time(t);
    const double x = frequency() * t;
    const double s = std::sin(x) - x;
    return qfi_prefactor_ * s * s / (lambda_ * lambda_ * lambda_) * var_x2_;
  }

  double qfi_at_peak(int n) const {
    const double tn = tau(n);
    const double w = cfg_.omega;
    return qfi_prefactor_ * w * w / (lambda_ * lambda_) * tn * tn * var_x2_;
  }

  double mean_p(double t) const {
    return -std::sqrt(2.0 * eta_) * cfg_.alpha * std::sin(frequency() * t / 2.0);
  }

  double var_p(double t) const {
    const double phase = frequency() * t / 2.0;
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    return 0.5 * (c * c + eta_ * s * s);
  }

  /// d<P>/dg at fixed t (d/dg~ in the CIM convention). Both sqrt(eta) and the
  /// mode frequency nu = omega sqrt(1 - g^2) depend on the coupling.
  double susceptibility(double t) const {
    const double g = cfg_.g;
    const double w = cfg_.omega;
    const double nu = frequency() / 2.0;
    const double root_eta = std::sqrt(eta_);
    // d sqrt(eta)/dg: LMG eta = (1+g)/(1-g); CIM eta' = (1-g~)/(1+g~).
    const double d_root_eta = cfg_.convention == Convention::Lmg
                                  ? 1.0 / (root_eta * (1.0 - g) * (1.0 - g))
                                  : -1.0 / (root_eta * (1.0 + g) * (1.0 + g));
    const double d_nu = -g * w / std::sqrt(1.0 - g * g);
    return -std::sqrt(2.0) * cfg_.alpha *
           (d_root_eta * std::sin(nu * t) + root_eta * std::cos(nu * t) * t * d_nu);
  }

  /// Magnitude of the susceptibility at tau_n: sqrt(2) alpha omega tau_n |g| / (1 -+ g).
  double susceptibility_peak_magnitude(int n) const {
    const double g = cfg_.g;
    const double denom = cfg_.convention == Convention::Lmg ? 1.0 - g : 1.0 + g;
    return std::sqrt(2.0) * cfg_.alpha * cfg_.omega * tau(n) * std::abs(g) / denom;
  }

  double inverted_variance(double t) const {
    const double chi = susceptibility(t);
    return chi * chi / var_p(t);
  }

  double inverted_variance_peak(int n) const {
    if (n < 1) throw InvalidParameter("metrology: peak index n must be >= 1");
    const double g = cfg_.g;
    const double num = 4.0 * n * n * std::numbers::pi * std::numbers::pi * cfg_.alpha *
                       cfg_.alpha * g * g;
    if (cfg_.convention == Convention::Lmg) {
      return num / ((1.0 + g) * (1.0 - g) * (1.0 - g) * (1.0 - g));
    }
    return num / ((1.0 - g) * (1.0 + g) * (1.0 + g) * (1.0 + g));
  }

 private:
  static void require_time(double t) {
    if (!(t >= 0.0)) throw InvalidParameter("metrology: t must be >= 0");
  }

  SensingConfig cfg_;
  double lambda_ = 0.0;
  double sqrt_lambda_ = 0.0;
  double eta_ = 1.0;
  double qfi_prefactor_ = 0.0;
  double var_x2_ = 0.0;
};

inline double qfi(const SensingConfig& cfg, double t) { return Sensor(cfg).qfi(t); }
inline double qfi_at_peak(const SensingConfig& cfg, int n) { return Sensor(cfg).qfi_at_peak(n); }
inline double mean_p(const SensingConfig& cfg, double t) { return Sensor(cfg).mean_p(t); }
inline double var_p(const SensingConfig& cfg, double t) { return Sensor(cfg).var_p(t); }
inline double susceptibility(const SensingConfig& cfg, double t) {
  return Sensor(cfg).susceptibility(t);
}
inline double inverted_variance(const SensingConfig& cfg, double t) {
  return Sensor(cfg).inverted_variance(t);
}
inline double inverted_variance_peak(const SensingConfig& cfg, int n) {
  return Sensor(cfg).inverted_variance_peak(n);
}

struct MetrologyPoint {
  double t = 0.0;
  double qfi = 0.0;
  double mean_p = 0.0;
  double var_p = 0.0;
  double chi = 0.0;
  double inv_var = 0.0;
};

struct MetrologyCurve {
  SensingConfig config;
  std::vector<double> times;
  std::vector<double> qfi;
  std::vector<double> mean_p;
  std::vector<double> var_p;
  std::vector<double> chi;
  std::vector<double> inv_var;

  std::size_t size() const { return times.size(); }
  MetrologyPoint at(std::size_t i) const {
    return {times[i], qfi[i], mean_p[i], var_p[i], chi[i], inv_var[i]};
  }
};

inline MetrologyCurve metrology_curve(const SensingConfig& cfg, std::span<const double> times) {
  const Sensor sensor(cfg);
  MetrologyCurve c;
  c.config = cfg;
  c.times.assign(times.begin(), times.end());
  for (double t : times) {
    c.qfi.push_back(sensor.qfi(t));
    c.mean_p.push_back(sensor.mean_p(t));
    c.var_p.push_back(sensor.var_p(t));
    const double chi = sensor.susceptibility(t);
    c.chi.push_back(chi);
    c.inv_var.push_back(chi * chi / c.var_p.back());
  }
  return c;
}

/// <P> after the working-point time tau = pi / (omega sqrt(1 - g_o^2)) for each
/// g in the grid (LMG convention).
inline std::vector<std::pair<double, double>> working_point_scan(double g_o,
                                                                 std::span<const double> g_grid,
                                                                 double omega, double alpha) {
  SensingConfig{g_o, omega, alpha, Convention::Lmg}.validate();
  const double t = std::numbers::pi / (omega * std::sqrt(1.0 - g_o * g_o));
  std::vector<std::pair<double, double>> out;
  out.reserve(g_grid.size());
  for (double g : g_grid) {
    out.emplace_back(g, mean_p(SensingConfig{g, omega, alpha, Convention::Lmg}, t));
  }
  return out;
}

}  // namespace cimlmg::metrology
