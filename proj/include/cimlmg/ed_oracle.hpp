#pragma once

// Brute-force references: the finite-N LMG Hamiltonian in the Dicke sector and
// the single-mode bosonic Hamiltonian in a truncated Fock space.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cimlmg/errors.hpp"
#include "cimlmg/lmg_analytic.hpp"

namespace cimlmg::ed {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using StateVector = Eigen::VectorXcd;

/// Collective spin operators for spin j = N/2 in the basis m = j, j-1, ..., -j.
struct DickeOperators {
  int n_spins = 0;
  double j = 0.0;
  CMatrix sx, sy, sz, splus, sminus;

  static DickeOperators build(int n_spins) {
    if (n_spins < 1) throw InvalidParameter("ed: n_spins must be >= 1");
    DickeOperators ops;
    ops.n_spins = n_spins;
    ops.j = n_spins / 2.0;
    const int dim = n_spins + 1;
    ops.sz = CMatrix::Zero(dim, dim);
    ops.splus = CMatrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      const double m = ops.j - i;
      ops.sz(i, i) = m;
      // S+ |j, m> = sqrt(j(j+1) - m(m+1)) |j, m+1>; |j, m+1> sits at row i-1.
      if (i > 0) ops.splus(i - 1, i) = std::sqrt(ops.j * (ops.j + 1.0) - m * (m + 1.0));
    }
    ops.sminus = ops.splus.adjoint();
    ops.sx = (ops.splus + ops.sminus) / 2.0;
    ops.sy = (ops.splus - ops.sminus) / Complex(0.0, 2.0);
    return ops;
  }
};

/// exp(i pi (Sz + N/2)): the Z2 symmetry of the LMG Hamiltonian.
inline CMatrix spin_parity(int n_spins) {
  const int dim = n_spins + 1;
  CMatrix p = CMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    // Sz + N/2 = N - i for row i.
    p(i, i) = ((n_spins - i) % 2 == 0) ? 1.0 : -1.0;
  }
  return p;
}

/// H = (2 lambda / N)(Sx^2 - Sy^2) + 2 h Sz with Sx^2 - Sy^2 = (S+^2 + S-^2)/2.
inline CMatrix lmg_hamiltonian_matrix(const lmg::LmgParams& p) {
  p.validate();
  if (!p.n_spins) throw InvalidParameter("ed: LMG Hamiltonian needs n_spins");
  const auto ops = DickeOperators::build(*p.n_spins);
  const double n = static_cast<double>(*p.n_spins);
  const CMatrix sp2 = ops.splus * ops.splus;
  const CMatrix pair = (sp2 + sp2.adjoint()) / 2.0;
  return (2.0 * p.lambda / n) * pair + (2.0 * p.h) * ops.sz;
}

template <class Matrix>
double hermiticity_defect(const Matrix& h) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

template <class Matrix>
void require_hermitian(const Matrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) throw InvalidParameter("ed: matrix must be square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (hermiticity_defect(h) > 1e-12 * scale) throw InvalidParameter("ed: matrix is not Hermitian");
}

struct GroundState {
  double energy = 0.0;
  StateVector vector;
};

template <class Matrix>
GroundState ground_state(const Matrix& h) {
  require_hermitian(h);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw ConvergenceError("ed: eigensolver did not converge");
  GroundState gs;
  gs.energy = solver.eigenvalues()(0);
  gs.vector = solver.eigenvectors().col(0).template cast<Complex>();
  gs.vector.normalize();
  const double residual = (h.template cast<Complex>() * gs.vector - gs.energy * gs.vector).norm();
  const double norm = std::max(1.0, h.cwiseAbs().maxCoeff() * static_cast<double>(h.rows()));
  if (residual > 1e-8 * norm) throw ConvergenceError("ed: ground-state residual too large");
  return gs;
}

template <class Matrix>
Eigen::VectorXd eigenvalues(const Matrix& h) {
  require_hermitian(h);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("ed: eigensolver did not converge");
  return solver.eigenvalues();
}

/// Ladder and quadrature operators truncated to `cutoff` Fock levels.
struct FockOperators {
  int cutoff = 0;
  CMatrix a, adag, x, p;

  static FockOperators build(int cutoff) {
    if (cutoff < 2) throw InvalidParameter("ed: Fock cutoff must be >= 2");
    FockOperators ops;
    ops.cutoff = cutoff;
    ops.a = CMatrix::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) ops.a(n - 1, n) = std::sqrt(static_cast<double>(n));
    ops.adag = ops.a.adjoint();
    ops.x = (ops.a + ops.adag) / std::sqrt(2.0);
    ops.p = (ops.a - ops.adag) / Complex(0.0, std::sqrt(2.0));
    return ops;
  }
};

/// omega [a^dag a + (g/2)(a^dag^2 + a^2)], real symmetric in the Fock basis.
inline RMatrix bosonic_hamiltonian(double omega, double g, int cutoff) {
  if (cutoff < 4) throw InvalidParameter("ed: bosonic Hamiltonian needs cutoff >= 4");
  RMatrix h = RMatrix::Zero(cutoff, cutoff);
  for (int n = 0; n < cutoff; ++n) {
    h(n, n) = omega * n;
    if (n + 2 < cutoff) {
      const double v = omega * g / 2.0 * std::sqrt((n + 1.0) * (n + 2.0));
      h(n + 2, n) = v;
      h(n, n + 2) = v;
    }
  }
  return h;
}

inline constexpr double kCoherentLeakage = 1e-8;

/// |alpha> truncated to `cutoff` levels; the amplitudes are not renormalized,
/// so the missing weight 1 - |psi|^2 is the truncation leakage.
inline StateVector coherent_state(double alpha, int cutoff) {
  if (cutoff < 1) throw InvalidParameter("ed: cutoff must be >= 1");
  StateVector psi = StateVector::Zero(cutoff);
  double amp = std::exp(-alpha * alpha / 2.0);
  psi(0) = amp;
  for (int n = 1; n < cutoff; ++n) {
    amp *= alpha / std::sqrt(static_cast<double>(n));
    psi(n) = amp;
  }
  const double leakage = 1.0 - psi.squaredNorm();
  if (leakage > kCoherentLeakage) {
    throw CutoffError("ed: cutoff " + std::to_string(cutoff) + " too small for alpha=" +
                      std::to_string(alpha) + " (leakage " + std::to_string(leakage) + ")");
  }
  return psi;
}

/// Weight in the top tenth of the Fock ladder (at least one level); a proxy for
/// dynamics that have reached the artificial boundary.
inline double truncation_leakage(const StateVector& psi) {
  const auto dim = psi.size();
  const auto top = std::max<Eigen::Index>(1, dim / 10);
  return psi.tail(top).squaredNorm();
}

/// Spectral propagator exp(-i H t) for a fixed Hermitian H.
template <class Matrix>
class Propagator {
 public:
  explicit Propagator(const Matrix& h) {
    require_hermitian(h);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success) throw ConvergenceError("ed: eigensolver did not converge");
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors().template cast<Complex>();
  }

  StateVector evolve(const StateVector& psi0, double t) const {
    if (psi0.size() != vectors_.rows()) throw InvalidParameter("ed: state dimension mismatch");
    StateVector coeffs = vectors_.adjoint() * psi0;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
      coeffs(k) *= std::exp(Complex(0.0, -energies_(k) * t));
    }
    return vectors_ * coeffs;
  }

  const Eigen::VectorXd& energies() const { return energies_; }

 private:
  Eigen::VectorXd energies_;
  CMatrix vectors_;
};

template <class Matrix>
StateVector evolve(const Matrix& h, const StateVector& psi0, double t) {
  return Propagator<Matrix>(h).evolve(psi0, t);
}

inline double expectation(const CMatrix& op, const StateVector& psi) {
  return psi.dot(op * psi).real();
}

struct QuadratureMoments {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_p = 0.0;
};

inline QuadratureMoments quadrature_moments(const FockOperators& ops, const StateVector& psi) {
  const double norm2 = psi.squaredNorm();
  QuadratureMoments m;
  m.mean_x = expectation(ops.x, psi) / norm2;
  const StateVector ppsi = ops.p * psi;
  m.mean_p = psi.dot(ppsi).real() / norm2;
  m.var_p = ppsi.squaredNorm() / norm2 - m.mean_p * m.mean_p;
  return m;
}

/// Cutoff rule: ceil(2 alpha^2 + 10 alpha + 20), times ceil(eta) for g > 0,
/// doubled until the evolved state keeps truncation_leakage <= 1e-8 at every
/// requested time.
inline int choose_cutoff(double alpha, double g, double omega, std::span<const double> times,
                         int max_cutoff = 4096) {
  int cutoff = static_cast<int>(std::ceil(2.0 * alpha * alpha + 10.0 * alpha + 20.0));
  if (g > 0.0) cutoff *= static_cast<int>(std::ceil((1.0 + g) / (1.0 - g)));
  while (cutoff <= max_cutoff) {
    const StateVector psi0 = coherent_state(alpha, cutoff);
    const Propagator<RMatrix> prop(bosonic_hamiltonian(omega, g, cutoff));
    const bool ok = std::all_of(times.begin(), times.end(), [&](double t) {
      return truncation_leakage(prop.evolve(psi0, t)) <= kCoherentLeakage;
    });
    if (ok) return cutoff;
    cutoff *= 2;
  }
  throw CutoffError("ed: no cutoff <= " + std::to_string(max_cutoff) + " contains the evolution");
}

inline constexpr double kQfiLeakage = 1e-6;

struct QfiEstimate {
  double value = 0.0;            // at step dg
  double value_half_step = 0.0;  // at step dg / 2
  double relative_change = 0.0;
  double leakage = 0.0;
};

namespace detail {
inline double fidelity_qfi(double g, double omega, double alpha, double t, int cutoff, double dg,
                           double& leakage) {
  if (!(std::abs(g + dg) < 1.0) || !(std::abs(g - dg) < 1.0)) {
    throw DomainError("ed: numeric QFI needs |g +- dg| < 1");
  }
  const StateVector psi0 = coherent_state(alpha, cutoff);
  const StateVector plus = evolve(bosonic_hamiltonian(omega, g + dg, cutoff), psi0, t);
  const StateVector minus = evolve(bosonic_hamiltonian(omega, g - dg, cutoff), psi0, t);
  leakage = std::max({leakage, truncation_leakage(plus), truncation_leakage(minus)});
  if (leakage > kQfiLeakage) {
    throw CutoffError("ed: truncation leakage " + std::to_string(leakage) + " exceeds 1e-6");
  }
  const double overlap = std::abs(minus.dot(plus)) / (plus.norm() * minus.norm());
  return 8.0 * (1.0 - overlap) / ((2.0 * dg) * (2.0 * dg));
}
}  // namespace detail

/// Pure-state QFI for g from the fidelity between states evolved at g +- dg:
/// I = 8 (1 - |<psi_{g-dg}|psi_{g+dg}>|) / (2 dg)^2, with a step-halving check.
inline QfiEstimate numeric_qfi_checked(double g, double omega, double alpha, double t, int cutoff,
                                       double dg = 1e-4) {
  if (!(dg > 0.0)) throw InvalidParameter("ed: dg must be > 0");
  QfiEstimate q;
  q.value = detail::fidelity_qfi(g, omega, alpha, t, cutoff, dg, q.leakage);
  q.value_half_step = detail::fidelity_qfi(g, omega, alpha, t, cutoff, dg / 2.0, q.leakage);
  q.relative_change =
      q.value == 0.0 ? 0.0 : std::abs(q.value_half_step - q.value) / std::abs(q.value);
  return q;
}

inline double numeric_qfi(double g, double omega, double alpha, double t, int cutoff,
                          double dg = 1e-4) {
  return numeric_qfi_checked(g, omega, alpha, t, cutoff, dg).value;
}

}  // namespace cimlmg::ed
