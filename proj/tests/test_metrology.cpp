#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cimlmg/fit.hpp"
#include "cimlmg/metrology.hpp"

using namespace cimlmg;
using metrology::Convention;
using metrology::Sensor;
using metrology::SensingConfig;

namespace {
constexpr double kPi = std::numbers::pi;

SensingConfig lmg(double g, double alpha = 1.0) { return {g, 1.0, alpha, Convention::Lmg}; }
SensingConfig cimc(double g, double alpha = 1.0) { return {g, 1.0, alpha, Convention::Cim}; }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST(MetrologyBasics, LambdaAndTau) {
  EXPECT_EQ(metrology::lambda_g(0.0), 4.0);
  EXPECT_NEAR(metrology::lambda_g(0.96), 0.3136, 1e-15);
  EXPECT_THROW(metrology::lambda_g(1.0), DomainError);
  EXPECT_DOUBLE_EQ(metrology::tau_n(0.0, 1.0, 1), kPi);
  EXPECT_NEAR(metrology::tau_n(0.96, 1.0, 1), 2.0 * kPi / std::sqrt(0.3136), 1e-12);
  EXPECT_DOUBLE_EQ(metrology::tau_n(0.9, 2.0, 5), 5.0 * metrology::tau_n(0.9, 2.0, 1));
  EXPECT_THROW(metrology::tau_n(0.5, 1.0, 0), InvalidParameter);
}

TEST(MetrologyBasics, GuardBand) {
  EXPECT_THROW(Sensor(lmg(1.0 - 1e-7)), DomainError);
  EXPECT_NO_THROW(Sensor(lmg(1.0 - 2e-6)));
  EXPECT_THROW(Sensor(SensingConfig{0.5, 0.0, 1.0, Convention::Lmg}), InvalidParameter);
  EXPECT_THROW(Sensor(lmg(0.5, -1.0)), InvalidParameter);
}

TEST(MetrologyVarX2, MatchesGaussianMoments) {
  EXPECT_DOUBLE_EQ(metrology::var_x2_coherent(0.0), 0.5);
  EXPECT_DOUBLE_EQ(metrology::var_x2_coherent(1.0), 4.5);
  EXPECT_DOUBLE_EQ(metrology::var_x2_coherent(2.0), 16.5);
}

TEST(MetrologyQfi, OracleValues) {
  const Sensor s(lmg(0.92));
  EXPECT_EQ(s.qfi(0.0), 0.0);
  EXPECT_NEAR(s.qfi(s.tau(1)), 45179.4635059632505, 45179.5 * 1e-13);
  EXPECT_NEAR(s.qfi(1.3), 32.0733099423617830, 32.07 * 1e-13);
  EXPECT_LT(rel(s.qfi(s.tau(1)), s.qfi_at_peak(1)), 1e-10);
  // qfi_at_peak scales as n^2.
  EXPECT_NEAR(s.qfi_at_peak(3) / s.qfi_at_peak(1), 9.0, 1e-12);
  EXPECT_NEAR(Sensor(lmg(0.96)).qfi_at_peak(1), 3.54e5, 0.01e5);
}

TEST(MetrologyQuadrature, OracleValues) {
  const Sensor s(lmg(0.5));
  EXPECT_NEAR(s.mean_p(0.7), -1.39562931766797002, 1e-14);
  EXPECT_NEAR(s.var_p(0.7), 0.824630198722393930, 1e-14);
  EXPECT_NEAR(s.susceptibility(0.7), -1.04728982604135753, 1e-13);
  EXPECT_NEAR(s.inverted_variance(0.7), 1.33007011073453600, 1e-13);
  EXPECT_EQ(s.mean_p(0.0), 0.0);
  EXPECT_EQ(s.var_p(0.0), 0.5);
  EXPECT_NEAR(s.mean_p(s.tau(1)), 0.0, 1e-14);
  EXPECT_NEAR(s.var_p(s.tau(2)), 0.5, 1e-12);
  // Midpoint of the first half period: var_p = eta / 2 with eta = 3.
  EXPECT_NEAR(s.var_p(s.tau(1) / 2.0), 1.5, 1e-12);
  EXPECT_NEAR(Sensor(lmg(0.0)).mean_p(kPi / 2.0), -std::sqrt(2.0), 1e-15);
}

TEST(MetrologyQuadrature, PeriodicInTwoTau) {
  const Sensor s(lmg(0.8, 2.0));
  const double period = 2.0 * s.tau(1);
  for (double t : {0.3, 1.7, 4.2}) {
    EXPECT_NEAR(s.mean_p(t + period), s.mean_p(t), 1e-12);
    EXPECT_NEAR(s.var_p(t + period), s.var_p(t), 1e-12);
  }
}

TEST(MetrologySusceptibility, PeakMagnitudeAndFiniteDifference) {
  const Sensor s(lmg(0.92));
  EXPECT_NEAR(std::abs(s.susceptibility(s.tau(2))), 260.733658608668816, 1e-10);
  const Sensor s96(lmg(0.96));
  EXPECT_NEAR(std::abs(s96.susceptibility(s96.tau(1))), std::sqrt(2.0) * s96.tau(1) * 0.96 / 0.04, 1e-9);
  EXPECT_NEAR(Sensor(lmg(0.0)).susceptibility(kPi), 0.0, 1e-15);

  for (double g : {-0.7, 0.3, 0.92}) {
    const Sensor c(lmg(g));
    const double t = c.tau(1);
    const double d = 1e-6;
    const double fd = (metrology::mean_p(lmg(g + d), t) - metrology::mean_p(lmg(g - d), t)) / (2.0 * d);
    EXPECT_LT(std::abs(fd - c.susceptibility(t)), 1e-4 * std::max(1.0, std::abs(fd))) << g;
  }
}

TEST(MetrologyInvertedVariance, PeakValues) {
  EXPECT_NEAR(Sensor(lmg(0.92)).inverted_variance_peak(1), 33991.0203657309291, 1e-8);
  EXPECT_NEAR(Sensor(lmg(0.96)).inverted_variance_peak(1), 2.901e5, 0.001e5);
  EXPECT_NEAR(Sensor(cimc(0.96)).inverted_variance_peak(1), 120.8, 0.1);
  EXPECT_EQ(Sensor(cimc(-0.96)).inverted_variance_peak(1), Sensor(lmg(0.96)).inverted_variance_peak(1));
  const Sensor s(lmg(0.94, 3.0));
  for (int n = 1; n <= 4; ++n) {
    EXPECT_LT(rel(s.inverted_variance(s.tau(n)), s.inverted_variance_peak(n)), 1e-10);
  }
}

TEST(MetrologyInvertedVariance, HeisenbergExponent) {
  const Sensor s(lmg(0.96));
  std::vector<double> tau, f;
  for (int n = 1; n <= 6; ++n) {
    tau.push_back(s.tau(n));
    f.push_back(s.inverted_variance_peak(n));
  }
  EXPECT_NEAR(fit_power_law(tau, f).slope, 2.0, 1e-12);
}

TEST(MetrologyCramerRao, PeakRatio) {
  for (double alpha : {1.0, 2.0, 3.0}) {
    const Sensor s(lmg(0.9, alpha));
    const double expected = 4.0 * alpha * alpha * 0.81 / metrology::var_x2_coherent(alpha);
    for (int n = 1; n <= 3; ++n) {
      EXPECT_LT(rel(s.inverted_variance(s.tau(n)) / s.qfi(s.tau(n)), expected), 1e-10);
    }
    EXPECT_LT(expected, 1.0);
  }
}

TEST(MetrologyDuality, CimEqualsLmgAtNegatedCoupling) {
  for (int i = 0; i < 50; ++i) {
    const double gt = -0.95 + 1.9 * i / 49.0;
    const Sensor c(cimc(gt, 1.5));
    const Sensor l(lmg(-gt, 1.5));
    for (double t : {0.1, 2.3, 7.9}) {
      EXPECT_EQ(c.qfi(t), l.qfi(t));
      EXPECT_EQ(c.mean_p(t), l.mean_p(t));
      EXPECT_EQ(c.var_p(t), l.var_p(t));
      EXPECT_EQ(std::abs(c.susceptibility(t)), std::abs(l.susceptibility(t)));
      EXPECT_EQ(c.inverted_variance(t), l.inverted_variance(t));
    }
  }
}

TEST(MetrologyWorkingPoint, ScanAndSingleton) {
  const std::vector<double> one{0.9};
  const auto single = metrology::working_point_scan(0.9, one, 1.0, 1.0);
  ASSERT_EQ(single.size(), 1u);
  // The scan time is tau_1 of g_o, where <P> returns to zero.
  EXPECT_NEAR(single[0].second, 0.0, 1e-12);

  auto slope_at = [](double go) {
    const std::vector<double> grid{go - 1e-6, go + 1e-6};
    const auto v = metrology::working_point_scan(go, grid, 1.0, 1.0);
    return std::abs(v[1].second - v[0].second) / 2e-6;
  };
  EXPECT_GT(slope_at(0.95), slope_at(0.9));
  EXPECT_GT(slope_at(0.99), slope_at(0.95));
}

TEST(MetrologyCurve, ColumnsConsistent) {
  const std::vector<double> t{0.0, 0.5, 1.0, 3.0};
  const auto c = metrology::metrology_curve(lmg(0.5), t);
  ASSERT_EQ(c.size(), 4u);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(c.qfi[i], metrology::qfi(lmg(0.5), t[i]));
    EXPECT_DOUBLE_EQ(c.inv_var[i], c.chi[i] * c.chi[i] / c.var_p[i]);
  }
}
