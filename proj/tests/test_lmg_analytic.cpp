#include <gtest/gtest.h>

#include <cmath>

#include "cimlmg/lmg_analytic.hpp"

using namespace cimlmg;
using lmg::LmgParams;
using lmg::Phase;

namespace {
LmgParams at(double lambda, double h) { return {lambda, h, std::nullopt}; }
}  // namespace

TEST(LmgPhase, ClassifiesByMagnitude) {
  EXPECT_EQ(lmg::classify_phase(at(1.0, 1.5)), Phase::Normal);
  EXPECT_EQ(lmg::classify_phase(at(1.0, 0.5)), Phase::Deformed);
  EXPECT_EQ(lmg::classify_phase(at(1.0, 1.0)), Phase::Critical);
  EXPECT_EQ(lmg::classify_phase(at(-1.0, -1.0)), Phase::Critical);
  EXPECT_EQ(lmg::classify_phase(at(-2.0, 1.5)), Phase::Deformed);
  EXPECT_EQ(lmg::to_string(Phase::Deformed), "deformed");
}

TEST(LmgParams, RejectsZeroCouplingAndNonFinite) {
  EXPECT_THROW(lmg::ground_energy_density(at(0.0, 1.0)), InvalidParameter);
  EXPECT_THROW(lmg::ground_energy_density(at(1.0, NAN)), InvalidParameter);
  EXPECT_THROW(lmg::ground_energy_density(at(INFINITY, 1.0)), InvalidParameter);
  EXPECT_THROW((LmgParams{1.0, 0.5, 0}.validate()), InvalidParameter);
}

TEST(LmgEnergy, BranchValues) {
  EXPECT_DOUBLE_EQ(lmg::ground_energy_density(at(1.0, 0.0)), -0.5);
  EXPECT_DOUBLE_EQ(lmg::ground_energy_density(at(1.0, 2.0)), -2.0);
  EXPECT_DOUBLE_EQ(lmg::ground_energy_density(at(1.0, 1.0)), -1.0);
  EXPECT_DOUBLE_EQ(lmg::ground_energy_density(at(2.0, 1.0)), -1.25);
  // Both branches meet at |h| = |lambda|.
  EXPECT_NEAR(lmg::ground_energy_density(at(1.0, 1.0 - 1e-9)), -1.0, 1e-8);
}

TEST(LmgEnergy, InvariantUnderSignFlips) {
  for (double h = -2.0; h <= 2.0; h += 0.1) {
    const double e = lmg::ground_energy_density(at(0.8, h));
    EXPECT_EQ(e, lmg::ground_energy_density(at(-0.8, h)));
    EXPECT_EQ(e, lmg::ground_energy_density(at(0.8, -h)));
  }
}

TEST(LmgEnergy, FirstDerivativeContinuousSecondJumps) {
  const auto d = lmg::energy_density_derivatives(at(1.0, 1.0));
  ASSERT_TRUE(d.discontinuous());
  EXPECT_DOUBLE_EQ(d.first, -1.0);
  EXPECT_DOUBLE_EQ(d.deformed_limit->first, -1.0);
  EXPECT_DOUBLE_EQ(d.second - d.deformed_limit->second, 1.0);
  const auto d2 = lmg::energy_density_derivatives(at(2.0, 0.5));
  EXPECT_DOUBLE_EQ(d2.first, -0.25);
  EXPECT_DOUBLE_EQ(d2.second, -0.5);
  EXPECT_FALSE(d2.discontinuous());
}

TEST(LmgEnergy, FiniteDifferencesMatchAnalyticDerivatives) {
  auto e = [](double h) { return lmg::ground_energy_density(at(1.0, h)); };
  for (double h : {0.2, 0.6, 1.4, 1.8}) {
    const auto d = lmg::energy_density_derivatives(at(1.0, h));
    EXPECT_NEAR(lmg::numerical_derivative(e, h, 1e-5, 1), d.first, 1e-8);
    EXPECT_NEAR(lmg::numerical_derivative(e, h, 1e-4, 2), d.second, 1e-6);
  }
}

TEST(LmgEnergy, NumericalDerivativeGuards) {
  auto f = [](double x) { return x * x; };
  EXPECT_THROW(lmg::numerical_derivative(f, 0.0, 0.0, 1), InvalidParameter);
  EXPECT_THROW(lmg::numerical_derivative(f, 0.0, 0.1, 3), InvalidParameter);
  auto bad = [](double x) { return std::log(x); };
  EXPECT_THROW(lmg::numerical_derivative(bad, 0.0, 0.1, 1), DomainError);
}

TEST(LmgGap, ClosesAtCriticalPoint) {
  EXPECT_DOUBLE_EQ(lmg::excitation_gap(at(1.0, 2.0)), 2.0 * std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(lmg::excitation_gap(at(1.0, 0.0)), 2.0 * std::sqrt(2.0));
  EXPECT_EQ(lmg::excitation_gap(at(1.0, 1.0)), 0.0);
  EXPECT_LT(lmg::excitation_gap(at(1.0, 1.0 + 1e-6)), 1e-2);
  EXPECT_LT(lmg::excitation_gap(at(1.0, 1.0 - 1e-6)), 1e-2);
}

TEST(LmgTotalEnergy, ExtensivePartMatchesDensity) {
  for (double h : {0.3, 1.7}) {
    LmgParams p{1.0, h, 1000};
    const double e1 = lmg::ground_energy_total(p);
    p.n_spins = 2000;
    const double e2 = lmg::ground_energy_total(p);
    EXPECT_NEAR((e2 - e1) / 1000.0, lmg::ground_energy_density(at(1.0, h)), 1e-12);
  }
  EXPECT_THROW(lmg::ground_energy_total(at(1.0, 0.3)), InvalidParameter);
}

TEST(LmgBogoliubov, SqueezeParameter) {
  // Independent values: r = atanh(-lambda/h)/2 and atanh((l^2+h^2)/(3l^2-h^2))/2.
  EXPECT_NEAR(lmg::bogoliubov_parameter(at(0.5, 1.0)).r, -0.27465307216702742, 1e-15);
  const auto b = lmg::bogoliubov_parameter(at(0.5, 0.1));
  EXPECT_EQ(b.branch, Phase::Deformed);
  EXPECT_NEAR(b.r, 0.18349229377005012, 1e-15);
  EXPECT_THROW(lmg::bogoliubov_parameter(at(1.0, 1.0)), DomainError);
}

TEST(LmgSummary, BundlesAllQuantities) {
  const auto s = lmg::summarize(at(1.0, 0.5));
  EXPECT_EQ(s.phase, Phase::Deformed);
  EXPECT_DOUBLE_EQ(s.e_g, -0.625);
  EXPECT_DOUBLE_EQ(s.de_dh, -0.5);
  EXPECT_DOUBLE_EQ(s.d2e_dh2, -1.0);
  EXPECT_DOUBLE_EQ(s.gap, 2.0 * std::sqrt(2.0) * std::sqrt(0.75));
}
