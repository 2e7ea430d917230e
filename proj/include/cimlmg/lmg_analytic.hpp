#pragma once

// Thermodynamic-limit closed forms for the Lipkin-Meshkov-Glick model
//   H = (2 lambda / N) (Sx^2 - Sy^2) + 2 h Sz
// obtained from the Holstein-Primakoff + Bogoliubov treatment of both phases.
//
// The spectrum is invariant under lambda -> -lambda (a pi/2 rotation about z)
// and under h -> -h (a pi rotation about x), so branch selection and the
// closed forms use |lambda| and |h|. Signs only matter to the CIM mapping.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "cimlmg/errors.hpp"

namespace cimlmg::lmg {

/// |h| and |lambda| closer than this are treated as the critical point.
inline constexpr double kCriticalTolerance = 1e-12;

struct LmgParams {
  double lambda = 1.0;
  double h = 0.0;
  std::optional<int> n_spins;

  void validate() const {
    if (!std::isfinite(lambda) || !std::isfinite(h)) {
      throw InvalidParameter("lmg: lambda and h must be finite");
    }
    if (lambda == 0.0) {
      throw InvalidParameter("lmg: lambda must be non-zero");
    }
    if (n_spins && *n_spins < 1) {
      throw InvalidParameter("lmg: n_spins must be >= 1");
    }
  }
};

enum class Phase { Normal, Deformed, Critical };

inline std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Normal:
      return "normal";
    case Phase::Deformed:
      return "deformed";
    case Phase::Critical:
      return "critical";
  }
  return "?";
}

/// Branch of a magnitude comparison |field| vs |coupling|, shared with the
/// CIM-side closed forms.
inline Phase classify(double field, double coupling) {
  const double diff = std::abs(field) - std::abs(coupling);
  if (std::abs(diff) <= kCriticalTolerance) return Phase::Critical;
  return diff > 0.0 ? Phase::Normal : Phase::Deformed;
}

inline Phase classify_phase(const LmgParams& p) { return classify(p.h, p.lambda); }

/// First and second h-derivatives of e_g. At the critical point the
/// derivatives are piecewise: `first`/`second` then carry the normal-side
/// limits and `deformed_limit` the limits from the symmetry-broken side.
struct EnergyDerivatives {
  double first = 0.0;
  double second = 0.0;
  std::optional<std::pair<double, double>> deformed_limit;

  bool discontinuous() const { return deformed_limit.has_value(); }
};

struct GroundStateSummary {
  double e_g = 0.0;
  double de_dh = 0.0;
  double d2e_dh2 = 0.0;
  double gap = 0.0;
  Phase phase = Phase::Normal;
};

struct BogoliubovParams {
  double r = 0.0;
  Phase branch = Phase::Normal;
};

/// Ground-state energy per spin: -|h| in the normal phase,
/// -|lambda|/2 - h^2/(2|lambda|) in the deformed phase.
inline double ground_energy_density(const LmgParams& p) {
  p.validate();
  const double lam = std::abs(p.lambda);
  if (classify_phase(p) == Phase::Deformed) {
    return -lam / 2.0 - p.h * p.h / (2.0 * lam);
  }
  return -std::abs(p.h);
}

/// Total ground-state energy including the O(1) Bogoliubov zero-point terms.
/// The deformed branch uses (E_k - 3|lambda|)/2 + h^2/(2|lambda|) for the
/// non-extensive part; only the extensive part is checked against exact
/// diagonalization.
inline double ground_energy_total(const LmgParams& p) {
  p.validate();
  if (!p.n_spins) throw InvalidParameter("lmg: ground_energy_total needs n_spins");
  const double n = static_cast<double>(*p.n_spins);
  const double lam = std::abs(p.lambda);
  const double h2 = p.h * p.h;
  if (classify_phase(p) == Phase::Deformed) {
    const double ek = 2.0 * std::sqrt(2.0) * std::sqrt(lam * lam - h2);
    return (ek - 3.0 * lam) / 2.0 + h2 / (2.0 * lam) - (lam / 2.0 + h2 / (2.0 * lam)) * n;
  }
  return std::sqrt(std::max(0.0, h2 - lam * lam)) - std::abs(p.h) * (n + 1.0);
}

/// Bogoliubov excitation energy; closes at |h| = |lambda|.
inline double excitation_gap(const LmgParams& p) {
  const double lam2 = p.lambda * p.lambda;
  const double h2 = p.h * p.h;
  switch (classify_phase(p)) {
    case Phase::Normal:
      return 2.0 * std::sqrt(h2 - lam2);
    case Phase::Deformed:
      return 2.0 * std::sqrt(2.0) * std::sqrt(lam2 - h2);
    case Phase::Critical:
      return 0.0;
  }
  return 0.0;
}

inline EnergyDerivatives energy_density_derivatives(const LmgParams& p) {
  p.validate();
  const double lam = std::abs(p.lambda);
  const double normal_first = p.h >= 0.0 ? -1.0 : 1.0;
  const std::pair<double, double> deformed{-p.h / lam, -1.0 / lam};
  switch (classify_phase(p)) {
    case Phase::Normal:
      return {normal_first, 0.0, std::nullopt};
    case Phase::Deformed:
      return {deformed.first, deformed.second, std::nullopt};
    case Phase::Critical:
      return {normal_first, 0.0, deformed};
  }
  return {};
}

inline GroundStateSummary summarize(const LmgParams& p) {
  const auto d = energy_density_derivatives(p);
  return {ground_energy_density(p), d.first, d.second, excitation_gap(p), classify_phase(p)};
}

/// Squeeze parameter r of the diagonalizing Bogoliubov transformation,
/// tanh(2r) = -lambda/h (normal) or (lambda^2+h^2)/(3 lambda^2-h^2) (deformed).
inline BogoliubovParams bogoliubov_parameter(const LmgParams& p) {
  p.validate();
  const Phase phase = classify_phase(p);
  double arg = 0.0;
  if (phase == Phase::Deformed) {
    const double lam2 = p.lambda * p.lambda;
    const double h2 = p.h * p.h;
    arg = (lam2 + h2) / (3.0 * lam2 - h2);
  } else {
    arg = -p.lambda / p.h;
  }
  if (!(std::abs(arg) < 1.0)) {
    throw DomainError("lmg: tanh(2r) argument " + std::to_string(arg) +
                      " outside (-1, 1); Bogoliubov branch invalid here");
  }
  return {0.5 * std::atanh(arg), phase};
}

/// Central finite difference of order 1 or 2.
template <class F>
double numerical_derivative(F&& f, double x, double step, int order) {
  if (!(step > 0.0)) throw InvalidParameter("numerical_derivative: step must be > 0");
  if (order != 1 && order != 2) throw InvalidParameter("numerical_derivative: order must be 1 or 2");
  const double fp = f(x + step);
  const double fm = f(x - step);
  if (!std::isfinite(fp) || !std::isfinite(fm)) {
    throw DomainError("numerical_derivative: non-finite sample");
  }
  if (order == 1) return (fp - fm) / (2.0 * step);
  const double f0 = f(x);
  if (!std::isfinite(f0)) throw DomainError("numerical_derivative: non-finite sample");
  return (fp - 2.0 * f0 + fm) / (step * step);
}

}  // namespace cimlmg::lmg
