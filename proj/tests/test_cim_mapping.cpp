#include <gtest/gtest.h>

#include <cmath>

#include "cimlmg/cim_mapping.hpp"
#include "cimlmg/cim_validity.hpp"
#include "cimlmg/lmg_analytic.hpp"

using namespace cimlmg;
using cim::CimParams;

namespace {
CimParams fig7_rates() {
  CimParams p;
  p.gamma_s = 0.1;
  p.gamma_p = 20.0;
  p.gamma_c = 30.0;
  p.kappa = 0.14;
  return p;
}
}  // namespace

TEST(CimSqueeze, Values) {
  auto p = fig7_rates();
  p.epsilon = 0.1 * 20.0 / 0.14;
  EXPECT_NEAR(cim::squeeze_parameter(p), 0.1, 1e-15);
  p.epsilon = 0.0;
  EXPECT_EQ(cim::squeeze_parameter(p), 0.0);
  CimParams q;
  q.kappa = 2.0;
  q.epsilon = 3.0;
  q.gamma_p = 6.0;
  EXPECT_DOUBLE_EQ(cim::squeeze_parameter(q), 1.0);
}

TEST(CimThreshold, Values) {
  EXPECT_NEAR(cim::oscillation_threshold(fig7_rates()), 14.285714285714286, 1e-12);
  EXPECT_DOUBLE_EQ(cim::oscillation_threshold(CimParams{}), 1.0);
  CimParams p;
  p.kappa = 0.0;
  EXPECT_THROW(cim::oscillation_threshold(p), InvalidParameter);
}

TEST(CimFrequency, SignedRootAndErrors) {
  EXPECT_DOUBLE_EQ(cim::renormalized_frequency(5.0, 3.0), 4.0);
  EXPECT_DOUBLE_EQ(cim::renormalized_frequency(-5.0, 3.0), -4.0);
  EXPECT_DOUBLE_EQ(cim::renormalized_frequency(1.0, 0.0), 1.0);
  EXPECT_THROW(cim::renormalized_frequency(1.0, 2.0), MappingInvalid);
  EXPECT_THROW(cim::renormalized_frequency(1.0, -0.1), InvalidParameter);
}

TEST(CimCoupling, Values) {
  CimParams p;
  p.zeta = 0.1;
  p.gamma_c = 30.0;
  p.n_pulses = 3000;
  EXPECT_NEAR(cim::coupling_strength(p), 1.0, 1e-14);
  p.zeta = 0.0;
  EXPECT_EQ(cim::coupling_strength(p), 0.0);
  p.zeta = 1.0;
  p.gamma_c = 4.0;
  p.n_pulses = 2;
  EXPECT_DOUBLE_EQ(cim::coupling_strength(p), 0.5);
}

TEST(CimEffective, ChainedIdentities) {
  CimParams p;
  p.delta = 5.0;
  p.kappa = 3.0;
  p.epsilon = 1.0;
  p.gamma_p = 1.0;
  p.zeta = 1.0;
  p.gamma_c = 1.0;
  p.n_pulses = 2;
  const auto e = cim::to_effective(p);
  EXPECT_DOUBLE_EQ(e.S, 3.0);
  EXPECT_DOUBLE_EQ(e.Omega, 4.0);
  EXPECT_DOUBLE_EQ(e.J, 2.0);
  EXPECT_DOUBLE_EQ(e.h, 2.0);
  EXPECT_DOUBLE_EQ(e.lambda, -1.0);
  EXPECT_DOUBLE_EQ(e.g_tilde, 0.5);
  EXPECT_DOUBLE_EQ(e.g, -0.5);

  p.zeta = 0.0;
  const auto free = cim::to_effective(p);
  EXPECT_EQ(free.lambda, 0.0);
  EXPECT_EQ(free.g_tilde, 0.0);
}

TEST(CimEffective, DeformedIffOmegaBelowJ) {
  for (double delta : {0.5, 1.0, 1.9, 2.1, 4.0}) {
    CimParams p;
    p.delta = delta;
    p.zeta = 1.0;
    p.n_pulses = 2;
    const auto e = cim::to_effective(p);
    const auto phase = lmg::classify_phase({e.lambda, e.h, std::nullopt});
    EXPECT_EQ(phase == lmg::Phase::Deformed, std::abs(e.Omega) < e.J) << delta;
  }
}

TEST(CimEnergy, BranchValuesAndLmgIdentity) {
  EXPECT_DOUBLE_EQ(cim::cim_ground_energy_density(1.0, 0.0), -0.25);
  EXPECT_DOUBLE_EQ(cim::cim_ground_energy_density(1.0, 1.0), -0.5);
  EXPECT_DOUBLE_EQ(cim::cim_ground_energy_density(1.0, -1.0), -0.5);
  EXPECT_DOUBLE_EQ(cim::cim_ground_energy_density(1.0, 2.0), -1.0);
  EXPECT_THROW(cim::cim_ground_energy_density(-1.0, 0.5), InvalidParameter);
  for (double x = 0.02; x <= 2.0; x += 0.02) {
    const double J = 1.3;
    const double lmg_e = lmg::ground_energy_density({J, x * J, std::nullopt});
    EXPECT_NEAR(cim::cim_ground_energy_density(J, x * J), 0.5 * lmg_e, 1e-15) << x;
  }
}

TEST(CimEnergy, SecondDerivativeJumpsAtBothCriticalPoints) {
  const double J = 2.0;
  for (double omega : {J, -J}) {
    const auto d = cim::cim_energy_density_derivatives(J, omega);
    ASSERT_TRUE(d.discontinuous());
    EXPECT_DOUBLE_EQ(d.second - d.deformed_limit->second, 1.0 / (2.0 * J));
    EXPECT_DOUBLE_EQ(d.first, d.deformed_limit->first);
  }
  EXPECT_DOUBLE_EQ(cim::cim_excitation_gap(J, 0.7), cim::cim_excitation_gap(J, -0.7));
  EXPECT_DOUBLE_EQ(cim::cim_ground_energy_density(J, 0.7), cim::cim_ground_energy_density(J, -0.7));
}

TEST(CimGap, Values) {
  EXPECT_EQ(cim::cim_excitation_gap(1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(cim::cim_excitation_gap(3.0, 5.0), 4.0);
  EXPECT_DOUBLE_EQ(cim::cim_excitation_gap(1.0, 0.0), std::sqrt(2.0));
}

TEST(CimCriticalDetuning, Values) {
  EXPECT_DOUBLE_EQ(cim::critical_detuning(3.0, 4.0), 5.0);
  EXPECT_DOUBLE_EQ(cim::critical_detuning(1.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(cim::critical_detuning(0.0, 2.0), 2.0);
  double prev = 0.0;
  for (double s = 0.0; s < 3.0; s += 0.25) {
    const double d = cim::critical_detuning(1.5, s);
    EXPECT_GT(d, prev);
    prev = d;
  }
}

TEST(CimValidity, Flags) {
  auto p = fig7_rates();
  p.epsilon = 0.0;
  auto r = cim::validity_report(p);
  EXPECT_DOUBLE_EQ(r.pump_to_signal, 200.0);
  EXPECT_DOUBLE_EQ(r.coupling_to_signal, 300.0);
  EXPECT_EQ(r.pump_noise_ratio, 0.0);
  EXPECT_TRUE(r.flags().empty());

  p.gamma_p = p.gamma_s;
  r = cim::validity_report(p);
  EXPECT_TRUE(r.adiabatic_questionable);
  ASSERT_EQ(r.flags().size(), 1u);

  // R at three times threshold is about 1.43, well above 0.3.
  p = fig7_rates();
  p.epsilon = 3.0 * cim::oscillation_threshold(p);
  r = cim::validity_report(p);
  EXPECT_NEAR(r.pump_noise_ratio, std::sqrt(0.005) * std::sqrt(408.16326530612247), 1e-9);
  EXPECT_TRUE(r.pump_noise_significant);
  EXPECT_FALSE(r.adiabatic_questionable);
}
