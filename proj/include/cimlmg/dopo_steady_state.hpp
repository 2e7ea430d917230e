#pragma once

// Deterministic gain-saturation fixed point of the reduced signal equation
//   da/dt = -(gamma_eff + i Delta) a + S a* - kappa^2/(2 gamma_p) |a|^2 a*,
//   gamma_eff = gamma_s + 2 (N-1) zeta^2 / gamma_c.
// Writing a = r e^{i phi} gives S - kappa^2 r^2/(2 gamma_p) = |gamma_eff + i Delta|.

#include <algorithm>
#include <cmath>

#include "cimlmg/cim_mapping.hpp"

namespace cimlmg::sde {

/// Signal loss including the uniform loss from the eliminated coupling fields.
inline double effective_signal_loss(const cim::CimParams& p) {
  return p.gamma_s + 2.0 * static_cast<double>(p.n_pulses - 1) * p.zeta * p.zeta / p.gamma_c;
}

/// Above-threshold photon number n_inf per pulse for eps = pump_ratio * eps_th;
/// zero below the (coupling- and detuning-shifted) threshold.
inline double steady_state_prediction(const cim::CimParams& p, double pump_ratio) {
  const double eps = pump_ratio * cim::oscillation_threshold(p);
  const double gain = p.kappa * eps / p.gamma_p;
  const double loss = std::hypot(effective_signal_loss(p), p.delta);
  return std::max(0.0, 2.0 * p.gamma_p / (p.kappa * p.kappa) * (gain - loss));
}

/// Ratio of pump-noise to signal-noise strength, sqrt(gamma_s/gamma_p) sqrt(n_sat).
inline double pump_noise_ratio(const cim::CimParams& p, double pump_ratio) {
  return std::sqrt(p.gamma_s / p.gamma_p) * std::sqrt(steady_state_prediction(p, pump_ratio));
}

}  // namespace cimlmg::sde
