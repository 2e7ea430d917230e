#pragma once

#include <string>
#include <vector>

#include "cimlmg/cim_mapping.hpp"
#include "cimlmg/dopo_steady_state.hpp"

namespace cimlmg::cim {

inline constexpr double kMinTimeScaleSeparation = 10.0;
inline constexpr double kMaxPumpNoiseRatio = 0.3;

/// Diagnostics for the two adiabatic eliminations and the dropped pump noise.
struct ValidityReport {
  double pump_to_signal = 0.0;      // gamma_p / gamma_s
  double coupling_to_signal = 0.0;  // gamma_c / gamma_s
  double pump_ratio = 0.0;          // eps / eps_th
  double saturation_photons = 0.0;
  double pump_noise_ratio = 0.0;
  bool adiabatic_questionable = false;
  bool pump_noise_significant = false;

  std::vector<std::string> flags() const {
    std::vector<std::string> out;
    if (adiabatic_questionable) out.emplace_back("adiabatic elimination questionable");
    if (pump_noise_significant) out.emplace_back("R not << 1");
    return out;
  }
};

inline ValidityReport validity_report(const CimParams& p) {
  p.validate();
  ValidityReport r;
  r.pump_to_signal = p.gamma_p / p.gamma_s;
  r.coupling_to_signal = p.gamma_c / p.gamma_s;
  r.pump_ratio = p.epsilon / oscillation_threshold(p);
  r.saturation_photons = sde::steady_state_prediction(p, r.pump_ratio);
  r.pump_noise_ratio = sde::pump_noise_ratio(p, r.pump_ratio);
  r.adiabatic_questionable = r.pump_to_signal < kMinTimeScaleSeparation ||
                             r.coupling_to_signal < kMinTimeScaleSeparation;
  r.pump_noise_significant = r.pump_noise_ratio > kMaxPumpNoiseRatio;
  return r;
}

}  // namespace cimlmg::cim
