#pragma once

// c-number Langevin simulation of N mutually injected DOPO pulses.
//
// Full model, per pulse j and ordered pair (j, k), k != j:
//   da_p  = [-gamma_p a_p + eps - (kappa/2) a_s^2] dt + sqrt(gamma_p) dW
//   da_s  = [-(i Delta + gamma_s) a_s + kappa a_s* a_p + zeta sum_k (a_c,jk - i a_c,kj)] dt
//           + sqrt(gamma_s) dW
//   da_c,jk = [-gamma_c a_c,jk - zeta a_s,j - i zeta a_s,k] dt + sqrt(gamma_c) dW
// Reduced model (pump and coupling fields slaved):
//   da_s = [-(gamma_eff + i Delta) a_s + S a_s* - kappa^2/(2 gamma_p) a_s* a_s^2] dt
//          + sqrt(gamma_s) dW_s + (kappa/sqrt(gamma_p)) a_s* dW_p + coupling noise
// Every complex increment is dW = sqrt(dt) (n1 + i n2) with n1, n2 ~ N(0, 1), so
// <|dW|^2> = 2 dt and the vacuum floor of <|a|^2> is 1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cimlmg/cim_mapping.hpp"
#include "cimlmg/dopo_steady_state.hpp"
#include "cimlmg/errors.hpp"
#include "cimlmg/parallel.hpp"

namespace cimlmg::sde {

using Complex = std::complex<double>;

enum class Model { FullThreeField, ReducedWithAuxNoise, ReducedSignalNoiseOnly, Deterministic };
enum class Calculus { Ito, Stratonovich };
/// Reading of the coupling-noise term of the reduced equation: one stream per
/// ordered pair (a_c,jk and a_c,kj independent) or one shared stream per
/// unordered pair entering as (1 - i) dW.
enum class CouplingNoise { Independent, Correlated };

inline std::string_view to_string(Model m) {
  switch (m) {
    case Model::FullThreeField:
      return "full";
    case Model::ReducedWithAuxNoise:
      return "reduced_aux";
    case Model::ReducedSignalNoiseOnly:
      return "reduced_signal";
    case Model::Deterministic:
      return "deterministic";
  }
  return "?";
}

inline Model parse_model(std::string_view s) {
  if (s == "full") return Model::FullThreeField;
  if (s == "reduced_aux") return Model::ReducedWithAuxNoise;
  if (s == "reduced_signal") return Model::ReducedSignalNoiseOnly;
  if (s == "deterministic") return Model::Deterministic;
  throw InvalidParameter("sde: unknown model '" + std::string(s) + "'");
}

struct SdeConfig {
  cim::CimParams cim;
  double pump_ratio = 1.0;  // eps / eps_th; overrides cim.epsilon
  Model model = Model::ReducedSignalNoiseOnly;
  double dt = 0.01;
  double t_end = 100.0;
  int n_trajectories = 1;
  std::uint64_t seed = 0;
  int n_record = 201;
  /// Real displacement of every signal amplitude at t = 0. Needed to leave the
  /// unstable a_s = 0 fixed point when noise is off.
  double initial_signal = 0.0;
  Calculus calculus = Calculus::Ito;
  CouplingNoise coupling_noise = CouplingNoise::Independent;
  /// Pulses whose amplitudes are stored (the first `record_pulses`); the
  /// pulse-averaged photon number is always stored.
  int record_pulses = 1;
  /// Pair-resolved coupling fields/noises are used up to this many pulses.
  int max_full_pulses = 128;
  /// Multiplies every noise term; 0 gives the deterministic drift of any model.
  double noise_scale = 1.0;
  /// Optional symmetric N x N (row-major) couplings zeta_jk replacing the
  /// uniform cim.zeta; the diagonal is ignored. The closed-form mapping and
  /// steady_state_prediction only cover the uniform case.
  std::vector<double> coupling_matrix;

  double zeta(int j, int k) const {
    if (coupling_matrix.empty()) return cim.zeta;
    return coupling_matrix[static_cast<std::size_t>(j) * cim.n_pulses + k];
  }

  /// gamma_s + (2/gamma_c) sum_k zeta_jk^2 for each pulse j.
  std::vector<double> pulse_losses() const {
    std::vector<double> out(static_cast<std::size_t>(cim.n_pulses));
    for (int j = 0; j < cim.n_pulses; ++j) {
      if (coupling_matrix.empty()) {
        out[j] = effective_signal_loss(cim);
        continue;
      }
      double s = 0.0;
      for (int k = 0; k < cim.n_pulses; ++k) {
        if (k != j) s += zeta(j, k) * zeta(j, k);
      }
      out[j] = cim.gamma_s + 2.0 * s / cim.gamma_c;
    }
    return out;
  }

  double epsilon() const { return pump_ratio * cim::oscillation_threshold(cim); }

  std::int64_t n_steps() const { return std::llround(t_end / dt); }

  void validate() const {
    cim.validate();
    if (!std::isfinite(pump_ratio) || pump_ratio < 0.0) {
      throw InvalidParameter("sde: pump_ratio must be finite and >= 0");
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidParameter("sde: t_end must be > 0");
    if (!(dt > 0.0) || dt > t_end) throw InvalidParameter("sde: dt must be in (0, t_end]");
    if (n_trajectories < 1) throw InvalidParameter("sde: n_trajectories must be >= 1");
    if (n_record < 2) throw InvalidParameter("sde: n_record must be >= 2");
    if (std::abs(static_cast<double>(n_steps()) * dt - t_end) > 1e-9 * t_end) {
      throw InvalidParameter("sde: t_end must be a whole number of dt steps");
    }
    if (n_steps() % (n_record - 1) != 0) {
      throw InvalidParameter("sde: n_record - 1 must divide the step count t_end/dt");
    }
    if (record_pulses < 0 || record_pulses > cim.n_pulses) {
      throw InvalidParameter("sde: record_pulses must be in [0, n_pulses]");
    }
    if (!(noise_scale >= 0.0)) throw InvalidParameter("sde: noise_scale must be >= 0");
    if (!std::isfinite(initial_signal)) throw InvalidParameter("sde: initial_signal must be finite");
    if (!coupling_matrix.empty()) {
      const auto n = static_cast<std::size_t>(cim.n_pulses);
      if (coupling_matrix.size() != n * n) {
        throw InvalidParameter("sde: coupling_matrix must hold n_pulses^2 entries");
      }
      for (int j = 0; j < cim.n_pulses; ++j) {
        for (int k = 0; k < j; ++k) {
          const double a = zeta(j, k), b = zeta(k, j);
          if (!std::isfinite(a) || a != b) {
            throw InvalidParameter("sde: coupling_matrix must be finite and symmetric");
          }
        }
      }
    }
    if (model == Model::FullThreeField) {
      const double fastest = std::max(cim.gamma_p, cim.gamma_c);
      if (dt > 0.1 / fastest) {
        throw SdeError("sde: dt=" + std::to_string(dt) + " exceeds 0.1/max(gamma_p, gamma_c)=" +
                       std::to_string(0.1 / fastest) + " for the full model");
      }
      if (cim.n_pulses > max_full_pulses) {
        throw InvalidParameter("sde: full model limited to " + std::to_string(max_full_pulses) +
                               " pulses (raise max_full_pulses to override)");
      }
    } else if (dt > 0.1 / cim.gamma_s) {
      throw SdeError("sde: dt=" + std::to_string(dt) + " exceeds 0.1/gamma_s=" +
                     std::to_string(0.1 / cim.gamma_s) + " for the reduced model");
    }
  }
};

struct SdeEnsemble {
  Model model = Model::ReducedSignalNoiseOnly;
  std::uint64_t seed = 0;
  int n_trajectories = 0;
  int n_pulses = 0;
  int record_pulses = 0;
  std::vector<double> times;
  // [trajectory][recorded pulse][time]
  std::vector<Complex> signal;
  // Full model only: pump of each recorded pulse, and a_c,j(j+1 mod N).
  std::vector<Complex> pump;
  std::vector<Complex> coupling;
  // [trajectory][time]: |a_s|^2 averaged over all pulses.
  std::vector<double> mean_photons;

  std::size_t n_times() const { return times.size(); }
  std::size_t index(int traj, int pulse, std::size_t t) const {
    return (static_cast<std::size_t>(traj) * record_pulses + pulse) * times.size() + t;
  }
  Complex signal_at(int traj, int pulse, std::size_t t) const { return signal[index(traj, pulse, t)]; }
  double photons(int traj, std::size_t t) const {
    return mean_photons[static_cast<std::size_t>(traj) * times.size() + t];
  }
  bool has_auxiliary_fields() const { return !pump.empty(); }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream per trajectory: keyed by (master seed, trajectory index).
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t traj)
      : engine_(splitmix64(splitmix64(seed) ^ splitmix64(traj + 0x632be59bd9b4e019ULL))) {}

  /// Complex Wiener increment with <|dW|^2> = 2 dt.
  Complex increment(double sqrt_dt) {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {sqrt_dt * re, sqrt_dt * im};
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

inline std::vector<std::int64_t> record_steps(const SdeConfig& cfg) {
  const std::int64_t steps = cfg.n_steps();
  std::vector<std::int64_t> out(static_cast<std::size_t>(cfg.n_record));
  for (int k = 0; k < cfg.n_record; ++k) {
    out[k] = (static_cast<std::int64_t>(k) * steps) / (cfg.n_record - 1);
  }
  return out;
}

inline SdeEnsemble allocate(const SdeConfig& cfg, bool aux_fields) {
  SdeEnsemble e;
  e.model = cfg.model;
  e.seed = cfg.seed;
  e.n_trajectories = cfg.n_trajectories;
  e.n_pulses = cfg.cim.n_pulses;
  e.record_pulses = cfg.record_pulses;
  // Nominal grid k t_end/(n_record-1); it lands exactly on integration steps.
  for (int k = 0; k < cfg.n_record; ++k) {
    e.times.push_back(static_cast<double>(k) * cfg.t_end / static_cast<double>(cfg.n_record - 1));
  }
  const std::size_t n = static_cast<std::size_t>(cfg.n_trajectories) * cfg.record_pulses * e.times.size();
  e.signal.assign(n, Complex{});
  if (aux_fields) {
    e.pump.assign(n, Complex{});
    e.coupling.assign(n, Complex{});
  }
  e.mean_photons.assign(static_cast<std::size_t>(cfg.n_trajectories) * e.times.size(), 0.0);
  return e;
}

inline void check_finite(const std::vector<Complex>& v, int traj, double t, std::string_view field) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) {
      throw SdeError("sde: non-finite " + std::string(field) + " amplitude (index " +
                     std::to_string(i) + ") in trajectory " + std::to_string(traj) + " at t=" +
                     std::to_string(t) + "; reduce dt");
    }
  }
}

inline double pulse_average(const std::vector<Complex>& a) {
  double s = 0.0;
  for (const Complex& z : a) s += std::norm(z);
  return s / static_cast<double>(a.size());
}

/// Ordered-pair slot of a_c,jk.
inline std::size_t pair_index(int n, int j, int k) {
  return static_cast<std::size_t>(j) * (n - 1) + (k < j ? k : k - 1);
}

inline void run_full_trajectory(const SdeConfig& cfg, int traj, SdeEnsemble& out) {
  const auto& p = cfg.cim;
  const int n = p.n_pulses;
  const double dt = cfg.dt;
  const double sdt = std::sqrt(dt);
  const double eps = cfg.epsilon();
  const double ns = cfg.noise_scale;
  const double amp_p = ns * std::sqrt(p.gamma_p);
  const double amp_s = ns * std::sqrt(p.gamma_s);
  const double amp_c = ns * std::sqrt(p.gamma_c);
  const Complex i1{0.0, 1.0};
  const Complex rot_s = -(Complex{p.gamma_s, p.delta});

  std::vector<Complex> ap(n), as(n, Complex{cfg.initial_signal, 0.0});
  std::vector<Complex> ac(static_cast<std::size_t>(n) * (n - 1));
  std::vector<Complex> dp(n), ds(n), dc(ac.size());
  std::vector<double> zp(ac.size());
  for (int j = 0; j < n; ++j) {
    for (int m = 0; m < n; ++m) {
      if (m != j) zp[pair_index(n, j, m)] = cfg.zeta(j, m);
    }
  }
  NoiseStream rng(cfg.seed, static_cast<std::uint64_t>(traj));
  const auto steps = record_steps(cfg);

  auto record = [&](std::size_t k) {
    const std::size_t nt = out.times.size();
    for (int j = 0; j < cfg.record_pulses; ++j) {
      const std::size_t idx = out.index(traj, j, k);
      out.signal[idx] = as[j];
      out.pump[idx] = ap[j];
      out.coupling[idx] = n > 1 ? ac[pair_index(n, j, (j + 1) % n)] : Complex{};
    }
    out.mean_photons[static_cast<std::size_t>(traj) * nt + k] = pulse_average(as);
  };

  record(0);
  std::int64_t step = 0;
  for (std::size_t k = 1; k < steps.size(); ++k) {
    for (; step < steps[k]; ++step) {
      for (int j = 0; j < n; ++j) {
        dp[j] = -p.gamma_p * ap[j] + eps - 0.5 * p.kappa * as[j] * as[j];
        Complex inj{};
        for (int m = 0; m < n; ++m) {
          if (m == j) continue;
          const std::size_t q = pair_index(n, j, m);
          inj += zp[q] * (ac[q] - i1 * ac[pair_index(n, m, j)]);
        }
        ds[j] = rot_s * as[j] + p.kappa * std::conj(as[j]) * ap[j] + inj;
      }
      for (int j = 0; j < n; ++j) {
        for (int m = 0; m < n; ++m) {
          if (m == j) continue;
          const std::size_t q = pair_index(n, j, m);
          dc[q] = -p.gamma_c * ac[q] - zp[q] * (as[j] + i1 * as[m]);
        }
      }
      for (int j = 0; j < n; ++j) ap[j] += dp[j] * dt + amp_p * rng.increment(sdt);
      for (int j = 0; j < n; ++j) as[j] += ds[j] * dt + amp_s * rng.increment(sdt);
      for (std::size_t q = 0; q < ac.size(); ++q) ac[q] += dc[q] * dt + amp_c * rng.increment(sdt);
    }
    const double t = out.times[k];
    check_finite(as, traj, t, "signal");
    check_finite(ap, traj, t, "pump");
    check_finite(ac, traj, t, "coupling");
    record(k);
  }
}

inline void run_reduced_trajectory(const SdeConfig& cfg, int traj, SdeEnsemble& out) {
  const auto& p = cfg.cim;
  const int n = p.n_pulses;
  const double dt = cfg.dt;
  const double sdt = std::sqrt(dt);
  const double S = p.kappa * cfg.epsilon() / p.gamma_p;
  const double sat = p.kappa * p.kappa / (2.0 * p.gamma_p);
  const bool noisy = cfg.model != Model::Deterministic && cfg.noise_scale > 0.0;
  const bool aux = noisy && cfg.model == Model::ReducedWithAuxNoise;
  const double ns = cfg.noise_scale;
  // Ito form of the Stratonovich multiplicative pump noise: extra drift +kappa^2/gamma_p a.
  const double strat = aux && cfg.calculus == Calculus::Stratonovich ? ns * ns * p.kappa * p.kappa / p.gamma_p : 0.0;
  const auto losses = cfg.pulse_losses();
  std::vector<Complex> rot(n);
  bool any_coupling = false;
  for (int j = 0; j < n; ++j) {
    rot[j] = -(Complex{losses[j] - strat, p.delta});
    any_coupling = any_coupling || losses[j] != p.gamma_s;
  }
  const double amp_s = ns * std::sqrt(p.gamma_s);
  const double amp_p = ns * p.kappa / std::sqrt(p.gamma_p);
  const double amp_c = ns / std::sqrt(p.gamma_c);
  const bool pairwise = n <= cfg.max_full_pulses;
  const bool coupled = aux && n > 1 && any_coupling;
  const Complex one_minus_i{1.0, -1.0};
  const Complex i1{0.0, 1.0};

  std::vector<Complex> as(n, Complex{cfg.initial_signal, 0.0});
  std::vector<Complex> drift(n), cn(coupled ? n : 0), pair_noise;
  if (coupled && pairwise) {
    const std::size_t n_pairs = cfg.coupling_noise == CouplingNoise::Independent
                                    ? static_cast<std::size_t>(n) * (n - 1)
                                    : static_cast<std::size_t>(n) * (n - 1) / 2;
    pair_noise.resize(n_pairs);
  }
  NoiseStream rng(cfg.seed, static_cast<std::uint64_t>(traj));
  const auto steps = record_steps(cfg);

  auto record = [&](std::size_t k) {
    const std::size_t nt = out.times.size();
    for (int j = 0; j < cfg.record_pulses; ++j) out.signal[out.index(traj, j, k)] = as[j];
    out.mean_photons[static_cast<std::size_t>(traj) * nt + k] = pulse_average(as);
  };

  auto coupling_noise = [&] {
    std::fill(cn.begin(), cn.end(), Complex{});
    if (!pairwise) {
      // Same per-pulse law as the pair sums; cross-pulse correlations dropped.
      for (int j = 0; j < n; ++j) {
        cn[j] = std::sqrt(p.gamma_c * (losses[j] - p.gamma_s)) * rng.increment(sdt);
      }
      return;
    }
    for (Complex& w : pair_noise) w = rng.increment(sdt);
    if (cfg.coupling_noise == CouplingNoise::Independent) {
      // dW_jk enters pulse j as a_c,jk and pulse k as -i a_c,jk.
      for (int j = 0; j < n; ++j) {
        for (int m = 0; m < n; ++m) {
          if (m == j) continue;
          const Complex w = cfg.zeta(j, m) * pair_noise[pair_index(n, j, m)];
          cn[j] += w;
          cn[m] -= i1 * w;
        }
      }
    } else {
      std::size_t q = 0;
      for (int j = 0; j < n; ++j) {
        for (int m = j + 1; m < n; ++m, ++q) {
          const Complex w = cfg.zeta(j, m) * one_minus_i * pair_noise[q];
          cn[j] += w;
          cn[m] += w;
        }
      }
    }
  };

  record(0);
  std::int64_t step = 0;
  for (std::size_t k = 1; k < steps.size(); ++k) {
    for (; step < steps[k]; ++step) {
      for (int j = 0; j < n; ++j) {
        const Complex c = std::conj(as[j]);
        drift[j] = rot[j] * as[j] + S * c - sat * c * as[j] * as[j];
      }
      if (!noisy) {
        for (int j = 0; j < n; ++j) as[j] += drift[j] * dt;
        continue;
      }
      if (coupled) coupling_noise();
      for (int j = 0; j < n; ++j) {
        Complex da = drift[j] * dt + amp_s * rng.increment(sdt);
        if (aux) {
          da += amp_p * std::conj(as[j]) * rng.increment(sdt);
          if (coupled) da += amp_c * cn[j];
        }
        as[j] += da;
      }
    }
    check_finite(as, traj, out.times[k], "signal");
    record(k);
  }
}

}  // namespace detail

/// threads affects wall time only; the ensemble is identical for any value.
inline SdeEnsemble simulate_full(const SdeConfig& cfg, unsigned threads = 0) {
  if (cfg.model != Model::FullThreeField) throw InvalidParameter("sde: simulate_full needs model=full");
  cfg.validate();
  SdeEnsemble out = detail::allocate(cfg, true);
  parallel_for(static_cast<std::size_t>(cfg.n_trajectories), threads,
               [&](std::size_t t) { detail::run_full_trajectory(cfg, static_cast<int>(t), out); });
  return out;
}

inline SdeEnsemble simulate_reduced(const SdeConfig& cfg, unsigned threads = 0) {
  if (cfg.model == Model::FullThreeField) {
    throw InvalidParameter("sde: simulate_reduced needs a reduced or deterministic model");
  }
  cfg.validate();
  SdeEnsemble out = detail::allocate(cfg, false);
  parallel_for(static_cast<std::size_t>(cfg.n_trajectories), threads,
               [&](std::size_t t) { detail::run_reduced_trajectory(cfg, static_cast<int>(t), out); });
  return out;
}

inline SdeEnsemble simulate(const SdeConfig& cfg, unsigned threads = 0) {
  return cfg.model == Model::FullThreeField ? simulate_full(cfg, threads)
                                            : simulate_reduced(cfg, threads);
}

struct PhotonStats {
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::optional<int> pulse;  // empty: averaged over all pulses
};

/// <|a_s|^2>(t) over trajectories with its standard error. With `pulse` set,
/// uses that recorded pulse; otherwise the pulse-averaged photon number.
inline PhotonStats photon_stats(const SdeEnsemble& e, std::optional<int> pulse = std::nullopt) {
  if (e.n_trajectories < 1 || e.times.empty()) throw InvalidParameter("sde: empty ensemble");
  if (pulse && (*pulse < 0 || *pulse >= e.record_pulses)) {
    throw InvalidParameter("sde: pulse " + std::to_string(*pulse) + " was not recorded");
  }
  const std::size_t nt = e.times.size();
  const double m = static_cast<double>(e.n_trajectories);
  PhotonStats s;
  s.times = e.times;
  s.pulse = pulse;
  s.mean.assign(nt, 0.0);
  s.stderr_.assign(nt, 0.0);
  for (std::size_t k = 0; k < nt; ++k) {
    double sum = 0.0, sum2 = 0.0;
    for (int t = 0; t < e.n_trajectories; ++t) {
      const double v = pulse ? std::norm(e.signal_at(t, *pulse, k)) : e.photons(t, k);
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / m;
    s.mean[k] = mean;
    if (e.n_trajectories > 1) {
      const double var = std::max(0.0, (sum2 - m * mean * mean) / (m - 1.0));
      s.stderr_[k] = std::sqrt(var / m);
    }
  }
  return s;
}

/// Time average of the ensemble mean over t >= t_from.
inline double steady_mean(const PhotonStats& s, double t_from) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    if (s.times[k] >= t_from) {
      sum += s.mean[k];
      ++count;
    }
  }
  if (count == 0) throw InvalidParameter("sde: no samples after t_from");
  return sum / static_cast<double>(count);
}

struct ModelComparison {
  std::vector<double> times;
  std::vector<Model> models;
  std::vector<std::vector<double>> mean;  // [model][time]
  std::vector<std::vector<double>> stderr_;
  std::vector<double> steady;              // per model, t >= t_steady
  std::vector<double> max_rel_diff;        // vs models[0], over t >= t_steady
  std::vector<double> steady_rel_diff;     // vs models[0]
};

/// Relative difference with a one-photon floor in the denominator, so curves
/// sitting at the vacuum level do not blow the ratio up.
inline double relative_difference(double a, double reference) {
  return std::abs(a - reference) / std::max(std::abs(reference), 1.0);
}

inline ModelComparison compare_stats(std::span<const PhotonStats> stats, std::span<const Model> models,
                                     double t_steady) {
  if (stats.empty() || stats.size() != models.size()) {
    throw InvalidParameter("sde: compare needs one model tag per statistics set");
  }
  ModelComparison c;
  c.times = stats[0].times;
  for (const auto& s : stats) {
    if (s.times != c.times) throw InvalidParameter("sde: compared ensembles have mismatched time grids");
  }
  for (std::size_t m = 0; m < stats.size(); ++m) {
    c.models.push_back(models[m]);
    c.mean.push_back(stats[m].mean);
    c.stderr_.push_back(stats[m].stderr_);
    c.steady.push_back(steady_mean(stats[m], t_steady));
  }
  for (std::size_t m = 0; m < stats.size(); ++m) {
    double worst = 0.0;
    for (std::size_t k = 0; k < c.times.size(); ++k) {
      if (c.times[k] < t_steady) continue;
      worst = std::max(worst, relative_difference(c.mean[m][k], c.mean[0][k]));
    }
    c.max_rel_diff.push_back(worst);
    c.steady_rel_diff.push_back(relative_difference(c.steady[m], c.steady[0]));
  }
  return c;
}

/// Runs every config and compares pulse-averaged <n_s(t)> against the first.
/// The configs must share physics, seed and grid and differ only in model.
inline ModelComparison compare_models(std::span<const SdeConfig> cfgs, double t_steady,
                                      unsigned threads = 0) {
  if (cfgs.empty()) throw InvalidParameter("sde: compare_models needs at least one config");
  const SdeConfig& ref = cfgs[0];
  for (const auto& c : cfgs) {
    if (!(c.cim == ref.cim) || c.pump_ratio != ref.pump_ratio || c.seed != ref.seed ||
        c.coupling_matrix != ref.coupling_matrix) {
      throw InvalidParameter("sde: compared configs must share physical parameters and seed");
    }
    if (c.t_end != ref.t_end || c.n_record != ref.n_record) {
      throw InvalidParameter("sde: compared configs have mismatched time grids");
    }
  }
  std::vector<PhotonStats> stats;
  std::vector<Model> models;
  for (const auto& c : cfgs) {
    stats.push_back(photon_stats(simulate(c, threads)));
    models.push_back(c.model);
  }
  return compare_stats(stats, models, t_steady);
}

}  // namespace cimlmg::sde
