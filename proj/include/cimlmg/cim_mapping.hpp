#pragma once

// Coherent Ising machine -> effective LMG model.
//
// Adiabatic elimination of the pump (gamma_p >> gamma_s) and of the coupling
// fields (gamma_c >> gamma_s, injection phase k_c z = pi/2) followed by a
// squeezing unitary gives
//   H_fin = -(J/N)(Sx^2 - Sy^2) + Omega Sz,
// with S = kappa eps / gamma_p, Omega = sqrt(Delta^2 - S^2), J = N zeta^2 / gamma_c,
// i.e. lambda = -J/2, h = Omega/2.

#include <cmath>
#include <string>

#include "cimlmg/errors.hpp"
#include "cimlmg/lmg_analytic.hpp"

namespace cimlmg::cim {

/// Machine-side parameter set. All rates share one time unit; zeta is the
/// uniform mutual-injection coupling zeta_jk = zeta.
struct CimParams {
  double delta = 0.0;
  double kappa = 1.0;
  double epsilon = 0.0;
  double gamma_s = 1.0;
  double gamma_p = 1.0;
  double gamma_c = 1.0;
  double zeta = 0.0;
  int n_pulses = 1;

  void validate() const {
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(delta) || !finite(kappa) || !finite(epsilon) || !finite(gamma_s) ||
        !finite(gamma_p) || !finite(gamma_c) || !finite(zeta)) {
      throw InvalidParameter("cim: parameters must be finite");
    }
    if (!(gamma_s > 0.0)) throw InvalidParameter("cim: gamma_s must be > 0");
    if (!(gamma_p > 0.0)) throw InvalidParameter("cim: gamma_p must be > 0");
    if (!(gamma_c > 0.0)) throw InvalidParameter("cim: gamma_c must be > 0");
    if (!(kappa > 0.0)) throw InvalidParameter("cim: kappa must be > 0");
    if (epsilon < 0.0) throw InvalidParameter("cim: epsilon must be >= 0");
    if (n_pulses < 1) throw InvalidParameter("cim: n_pulses must be >= 1");
  }

  friend bool operator==(const CimParams&, const CimParams&) = default;
};

struct EffectiveParams {
  double S = 0.0;
  double Omega = 0.0;
  double J = 0.0;
  double lambda = 0.0;
  double h = 0.0;
  double g_tilde = 0.0;
  double g = 0.0;
};

inline double squeeze_parameter(const CimParams& p) { return p.kappa * p.epsilon / p.gamma_p; }

inline double oscillation_threshold(const CimParams& p) {
  if (!(p.kappa > 0.0)) throw InvalidParameter("cim: oscillation threshold needs kappa > 0");
  return p.gamma_p * p.gamma_s / p.kappa;
}

/// Omega = sign(Delta) sqrt(Delta^2 - S^2). The signed extension lets the
/// phase diagram cover Omega < 0.
inline double renormalized_frequency(double delta, double S) {
  if (S < 0.0) throw InvalidParameter("cim: squeezing parameter must be >= 0");
  if (S > std::abs(delta)) {
    throw MappingInvalid("cim: squeezing S=" + std::to_string(S) + " exceeds |Delta|=" +
                         std::to_string(std::abs(delta)) + "; Omega would be imaginary");
  }
  return std::copysign(std::sqrt(delta * delta - S * S), delta);
}

inline double coupling_strength(const CimParams& p) {
  if (!(p.gamma_c > 0.0)) throw InvalidParameter("cim: gamma_c must be > 0");
  return static_cast<double>(p.n_pulses) * p.zeta * p.zeta / p.gamma_c;
}

/// Table of identities: h = Omega/2, lambda = -J/2, g~ = J/Omega = -g.
/// g~ is 0 when J = 0 and +-inf when Omega = 0 < J.
inline EffectiveParams to_effective(const CimParams& p) {
  p.validate();
  EffectiveParams e;
  e.S = squeeze_parameter(p);
  e.Omega = renormalized_frequency(p.delta, e.S);
  e.J = coupling_strength(p);
  e.lambda = -e.J / 2.0;
  e.h = e.Omega / 2.0;
  e.g_tilde = e.J == 0.0 ? 0.0 : e.J / e.Omega;
  e.g = -e.g_tilde;
  return e;
}

namespace detail {
inline void require_ferro_for_deformed(double J, double Omega) {
  if (lmg::classify(Omega, J) == lmg::Phase::Deformed && !(J > 0.0)) {
    throw InvalidParameter("cim: the |Omega| < |J| branch requires J > 0");
  }
}
}  // namespace detail

/// CIM ground-state energy per pulse: -|Omega|/2 for |Omega| >= J,
/// -J/4 - Omega^2/(4J) otherwise. Equal to e_g of the LMG model at
/// (lambda = -J/2, h = Omega/2).
inline double cim_ground_energy_density(double J, double Omega) {
  detail::require_ferro_for_deformed(J, Omega);
  if (lmg::classify(Omega, J) == lmg::Phase::Deformed) {
    return -J / 4.0 - Omega * Omega / (4.0 * J);
  }
  return -std::abs(Omega) / 2.0;
}

inline double cim_excitation_gap(double J, double Omega) {
  detail::require_ferro_for_deformed(J, Omega);
  switch (lmg::classify(Omega, J)) {
    case lmg::Phase::Normal:
      return std::sqrt(Omega * Omega - J * J);
    case lmg::Phase::Deformed:
      return std::sqrt(2.0) * std::sqrt(J * J - Omega * Omega);
    case lmg::Phase::Critical:
      return 0.0;
  }
  return 0.0;
}

/// d e_g / d Omega and d^2 e_g / d Omega^2; piecewise at |Omega| = J like the
/// LMG version.
inline lmg::EnergyDerivatives cim_energy_density_derivatives(double J, double Omega) {
  detail::require_ferro_for_deformed(J, Omega);
  const double normal_first = Omega >= 0.0 ? -0.5 : 0.5;
  switch (lmg::classify(Omega, J)) {
    case lmg::Phase::Normal:
      return {normal_first, 0.0, std::nullopt};
    case lmg::Phase::Deformed:
      return {-Omega / (2.0 * J), -1.0 / (2.0 * J), std::nullopt};
    case lmg::Phase::Critical:
      if (J > 0.0) {
        return {normal_first, 0.0, std::pair{-Omega / (2.0 * J), -1.0 / (2.0 * J)}};
      }
      return {normal_first, 0.0, std::nullopt};
  }
  return {};
}

/// Detuning at which Omega reaches J for a given squeezing.
inline double critical_detuning(double J, double S) { return std::hypot(J, S); }

}  // namespace cimlmg::cim
