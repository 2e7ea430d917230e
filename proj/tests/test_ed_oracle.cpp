#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cimlmg/ed_oracle.hpp"
#include "cimlmg/lmg_analytic.hpp"
#include "cimlmg/metrology.hpp"

using namespace cimlmg;
using ed::CMatrix;
using ed::RMatrix;
using ed::StateVector;

namespace {
double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }
ed::Complex I{0.0, 1.0};
}  // namespace

TEST(EdDicke, Su2AlgebraAndCasimir) {
  for (int n : {1, 2, 7, 60, 501}) {
    const auto ops = ed::DickeOperators::build(n);
    const auto id = CMatrix::Identity(n + 1, n + 1);
    EXPECT_LT(max_abs(ops.sx * ops.sy - ops.sy * ops.sx - I * ops.sz), 1e-10) << n;
    EXPECT_LT(max_abs(ops.sy * ops.sz - ops.sz * ops.sy - I * ops.sx), 1e-10) << n;
    EXPECT_LT(max_abs(ops.sz * ops.sx - ops.sx * ops.sz - I * ops.sy), 1e-10) << n;
    const double j = n / 2.0;
    const CMatrix c = ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz;
    EXPECT_LT(max_abs(c - j * (j + 1.0) * id), 1e-10 * std::max(1.0, j * j)) << n;
  }
  EXPECT_THROW(ed::DickeOperators::build(0), InvalidParameter);
}

TEST(EdLmg, SingleSpinReducesToField) {
  const auto h = ed::lmg_hamiltonian_matrix({1.0, 0.7, 1});
  const auto ev = ed::eigenvalues(h);
  EXPECT_NEAR(ev(0), -0.7, 1e-14);
  EXPECT_NEAR(ev(1), 0.7, 1e-14);
}

TEST(EdLmg, GroundEnergyOracles) {
  EXPECT_NEAR(ed::ground_state(ed::lmg_hamiltonian_matrix({1.0, 0.0, 2})).energy, -1.0, 1e-13);
  EXPECT_NEAR(ed::ground_state(ed::lmg_hamiltonian_matrix({1.0, 0.5, 2})).energy, -1.4142135623730951, 1e-13);
  EXPECT_NEAR(ed::ground_state(ed::lmg_hamiltonian_matrix({1.0, 0.3, 4})).energy, -2.1071307505705477, 1e-13);
  EXPECT_NEAR(ed::ground_state(ed::lmg_hamiltonian_matrix({0.7, 1.2, 10})).energy, -12.189972294294996, 1e-12);
  EXPECT_THROW(ed::lmg_hamiltonian_matrix({1.0, 0.5, std::nullopt}), InvalidParameter);
}

TEST(EdLmg, HermitianAndParitySymmetric) {
  for (int n : {3, 20, 101}) {
    const auto h = ed::lmg_hamiltonian_matrix({0.9, 0.4, n});
    EXPECT_LE(ed::hermiticity_defect(h), 1e-12);
    const auto par = ed::spin_parity(n);
    EXPECT_LT(max_abs(h * par - par * h), 1e-10);
  }
}

TEST(EdLmg, ConvergesToThermodynamicLimit) {
  for (double h : {0.0, 0.4, 1.6, 2.0}) {
    const double e = lmg::ground_energy_density({1.0, h, std::nullopt});
    double prev = INFINITY;
    for (int n : {50, 100, 200}) {
      const double err = std::abs(ed::ground_state(ed::lmg_hamiltonian_matrix({1.0, h, n})).energy / n - e);
      EXPECT_LT(err, prev) << h << ' ' << n;
      prev = err;
    }
    EXPECT_LE(prev, 0.02) << h;
  }
}

TEST(EdSolver, SmallAnalyticCases) {
  RMatrix d = RMatrix::Zero(3, 3);
  d.diagonal() << 3.0, 1.0, 2.0;
  const auto gs = ed::ground_state(d);
  EXPECT_DOUBLE_EQ(gs.energy, 1.0);
  EXPECT_NEAR(std::abs(gs.vector(1)), 1.0, 1e-15);

  RMatrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  const auto g2 = ed::ground_state(x);
  EXPECT_NEAR(g2.energy, -1.0, 1e-15);
  EXPECT_NEAR(std::abs(g2.vector(0) + g2.vector(1)), 0.0, 1e-15);

  RMatrix bad(2, 2);
  bad << 0.0, 1.0, 0.0, 0.0;
  EXPECT_THROW(ed::ground_state(bad), InvalidParameter);
}

TEST(EdFock, OperatorsAndHamiltonian) {
  const auto ops = ed::FockOperators::build(30);
  const CMatrix comm = ops.a * ops.adag - ops.adag * ops.a;
  EXPECT_LT(max_abs(comm.topLeftCorner(29, 29) - CMatrix::Identity(29, 29)), 1e-12);
  const CMatrix xp = ops.x * ops.p - ops.p * ops.x;
  EXPECT_LT(max_abs(xp.topLeftCorner(29, 29) - I * CMatrix::Identity(29, 29)), 1e-12);

  const auto h0 = ed::bosonic_hamiltonian(2.0, 0.0, 8);
  for (int n = 0; n < 8; ++n) EXPECT_EQ(h0(n, n), 2.0 * n);
  EXPECT_THROW(ed::bosonic_hamiltonian(1.0, 0.5, 3), InvalidParameter);

  // Level spacing omega sqrt(1 - g^2) = sqrt(3) at omega = 2, g = 0.5.
  const auto ev = ed::eigenvalues(ed::bosonic_hamiltonian(2.0, 0.5, 200));
  EXPECT_NEAR(ev(1) - ev(0), std::sqrt(3.0), 1e-9);
  EXPECT_NEAR(ev(2) - ev(1), std::sqrt(3.0), 1e-9);
}

TEST(EdFock, CoherentState) {
  const auto vac = ed::coherent_state(0.0, 10);
  EXPECT_EQ(vac(0), ed::Complex(1.0));
  EXPECT_EQ(vac.tail(9).norm(), 0.0);
  const auto ops = ed::FockOperators::build(40);
  const auto psi = ed::coherent_state(1.0, 40);
  EXPECT_NEAR(ed::expectation(ops.adag * ops.a, psi), 1.0, 1e-8);
  EXPECT_NEAR(ed::quadrature_moments(ops, psi).mean_x, std::sqrt(2.0), 1e-8);
  EXPECT_THROW(ed::coherent_state(3.0, 10), CutoffError);
}

TEST(EdFock, EvolutionMatchesClosedForms) {
  const metrology::Sensor s({0.5, 1.0, 1.0, metrology::Convention::Lmg});
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(s.tau(2) * k / 20.0);
  const int cutoff = ed::choose_cutoff(1.0, 0.5, 1.0, times);
  const auto ops = ed::FockOperators::build(cutoff);
  const ed::Propagator<RMatrix> prop(ed::bosonic_hamiltonian(1.0, 0.5, cutoff));
  const auto psi0 = ed::coherent_state(1.0, cutoff);
  EXPECT_LT((prop.evolve(psi0, 0.0) - psi0).norm(), 1e-12);
  for (double t : times) {
    const auto psi = prop.evolve(psi0, t);
    EXPECT_NEAR(psi.norm(), psi0.norm(), 1e-10);
    const auto m = ed::quadrature_moments(ops, psi);
    EXPECT_NEAR(m.mean_p, s.mean_p(t), 1e-6) << t;
    EXPECT_NEAR(m.var_p, s.var_p(t), 1e-6) << t;
  }
}

TEST(EdFock, DiagonalEvolutionIsPhaseRotation) {
  RMatrix h = RMatrix::Zero(3, 3);
  h.diagonal() << 0.0, 1.0, 2.5;
  StateVector psi(3);
  psi << 0.6, 0.0, 0.8;
  const auto out = ed::evolve(h, psi, 0.4);
  EXPECT_NEAR(std::abs(out(2) - 0.8 * std::exp(-I * 1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(out(0) - 0.6), 0.0, 1e-14);
}

TEST(EdQfi, NumericOracle) {
  EXPECT_NEAR(ed::numeric_qfi(0.5, 1.0, 1.0, 0.0, 40), 0.0, 1e-9);
  const auto q = ed::numeric_qfi_checked(0.5, 1.0, 1.0, 1.0, 80);
  EXPECT_NEAR(q.value, 4.03356803, 1e-5);
  EXPECT_LT(q.relative_change, 0.01);
  EXPECT_NEAR(ed::numeric_qfi(0.5, 1.0, 1.0, 2.5, 80), 60.835493154, 1e-3);
  EXPECT_THROW(ed::numeric_qfi(0.9, 1.0, 1.0, metrology::tau_n(0.9, 1.0, 1), 20), CutoffError);
  EXPECT_THROW(ed::numeric_qfi(0.99995, 1.0, 1.0, 1.0, 40), DomainError);
}
