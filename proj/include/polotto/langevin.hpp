#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "polotto/constants.hpp"
#include "polotto/errors.hpp"
#include "polotto/spectrum.hpp"
#include "polotto/thermo.hpp"

// Semiclassical simulation of the quantum Langevin equations.  Each mode is a
// complex Ornstein-Uhlenbeck process
//
//   dz = (i omega - gamma/2) z dt + dW,   <|dW|^2> = gamma nbar dt,
//
// so the ensemble mean of |z|^2 estimates the normally-ordered occupation
// directly (no vacuum half-quantum is added: all observables of interest are
// normally ordered and injecting vacuum noise would bias nbar by 1/2).
// Noise increments split equally over the real and imaginary parts; input
// noises of distinct modes are uncorrelated.
//
// Two steppers: Euler-Maruyama under the stability guard
// dt*max(omega, gamma) < 0.1, and an exact-exponential update whose one-step
// mean and variance match the OU process at any dt, which removes
// discretization bias from statistical acceptance checks.

namespace polotto::langevin {

enum class Stepper { euler_maruyama, exact_exponential };
enum class InitKind { deterministic, thermal };

namespace detail {

/// SplitMix64: tiny, platform-independent 64-bit generator; one instance per
/// trajectory, seeded from the master seed, keeps runs bit-reproducible.
struct Rng {
  std::uint64_t state;

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  /// Uniform in (0, 1].
  double next_unit_open() {
    return 1.0 - static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
  /// Standard complex normal: each component ~ N(0, 1), via Box-Muller.
  std::complex<double> next_complex_normal() {
    const double u1 = next_unit_open();
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * constants::pi * u2),
            r * std::sin(2.0 * constants::pi * u2)};
  }
};

inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  Rng mix{master ^ (0xD1B54A32D192ED03ull * (index + 1))};
  return mix.next_u64();
}

/// Compensated (Kahan) accumulator; makes ensemble sums associative enough
/// to be order-independent in practice.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

struct MeanVar {
  Kahan sum, sumsq;
  long n = 0;
  void add(double x) {
    sum.add(x);
    sumsq.add(x * x);
    ++n;
  }
  double mean() const { return n ? sum.sum / n : 0.0; }
  /// Standard error of the mean.
  double se() const {
    if (n < 2) return 0.0;
    const double m = mean();
    double var = (sumsq.sum - n * m * m) / (n - 1.0);
    return std::sqrt(std::max(0.0, var) / n);
  }
};

}  // namespace detail

struct ModeNoise {
  std::string name;
  double omega;   // gamma0 units; phase rotation e^{+i omega t}
  double gamma;   // damping rate, gamma0 units
  double nbar;    // reservoir equilibrium occupation
  double initial_occupation = 0.0;
  InitKind init = InitKind::thermal;
};

/// Reservoir couplings for a set of modes.  Cross-correlations between input
/// noises are identically zero.
struct NoiseSpec {
  std::vector<ModeNoise> modes;
  std::uint64_t seed = 1;

  void validate() const {
    if (modes.empty()) throw ValidationError("NoiseSpec: no modes");
    for (const auto& m : modes) {
      if (!(m.gamma > 0.0))
        throw ValidationError("NoiseSpec: damping rates must be > 0");
      if (m.nbar < 0.0 || m.initial_occupation < 0.0)
        throw ValidationError("NoiseSpec: occupations must be >= 0");
    }
  }
};

struct SimOptions {
  double dt = 0.01;       // 1/gamma0 units
  double horizon = 10.0;
  int n_traj = 1000;
  Stepper stepper = Stepper::exact_exponential;
  int n_checkpoints = 51;

  void validate(double max_omega, double max_gamma) const {
    if (!(dt > 0.0) || !(horizon > 0.0))
      throw ValidationError("SimOptions: dt and horizon must be > 0");
    if (n_traj < 1 || n_checkpoints < 2)
      throw ValidationError("SimOptions: need n_traj >= 1, n_checkpoints >= 2");
    if (!(dt * std::max(std::abs(max_omega), max_gamma) < 0.1))
      throw StabilityError(
          "SimOptions: dt * max(omega, gamma) = " +
          std::to_string(dt * std::max(std::abs(max_omega), max_gamma)) +
          " violates the stability guard (< 0.1)");
  }
  long n_steps() const { return std::lround(horizon / dt); }
};

struct SeriesStats {
  std::vector<double> t;
  std::vector<double> mean;
  std::vector<double> se;
};

struct CrossCorrelation {
  std::string pair;  // "c*d" style label
  double re_mean, re_se;
  double im_mean, im_se;
};

struct TrajectoryEnsemble {
  int n_traj = 0;
  double dt = 0.0;
  double horizon = 0.0;
  std::vector<std::string> mode_names;
  std::vector<SeriesStats> occupation;          // one series per mode
  std::vector<CrossCorrelation> cross_final;    // <z_i* z_j> at t = horizon
};

namespace detail {

struct OneStep {
  std::complex<double> factor;  // deterministic one-step propagator
  double noise_std;             // per-component std of the noise increment
};

inline OneStep make_step(const ModeNoise& m, double dt, Stepper stepper) {
  if (stepper == Stepper::exact_exponential) {
    const double decay = std::exp(-0.5 * m.gamma * dt);
    const std::complex<double> factor = std::polar(decay, m.omega * dt);
    const double var = m.nbar * (1.0 - decay * decay);
    return {factor, std::sqrt(0.5 * var)};
  }
  const std::complex<double> factor =
      1.0 + std::complex<double>(-0.5 * m.gamma, m.omega) * dt;
  return {factor, std::sqrt(0.5 * m.gamma * m.nbar * dt)};
}

inline std::complex<double> initial_amplitude(const ModeNoise& m, Rng& rng) {
  if (m.init == InitKind::deterministic)
    return {std::sqrt(m.initial_occupation), 0.0};
  // Thermal: complex Gaussian with <|z|^2> = initial_occupation.
  return std::sqrt(0.5 * m.initial_occupation) * rng.next_complex_normal();
}

inline std::vector<long> checkpoint_steps(long n_steps, int n_checkpoints) {
  std::vector<long> steps(static_cast<std::size_t>(n_checkpoints));
  for (int k = 0; k < n_checkpoints; ++k)
    steps[static_cast<std::size_t>(k)] =
        std::lround(static_cast<double>(n_steps) * k / (n_checkpoints - 1));
  return steps;
}

}  // namespace detail

/// Joint simulation of independent bare modes; reports per-mode occupation
/// series and the final-time cross-correlations between mode pairs.
inline TrajectoryEnsemble simulate_bare(const NoiseSpec& spec,
                                        const SimOptions& opt) {
  spec.validate();
  double max_omega = 0.0, max_gamma = 0.0;
  for (const auto& m : spec.modes) {
    max_omega = std::max(max_omega, std::abs(m.omega));
    max_gamma = std::max(max_gamma, m.gamma);
  }
  opt.validate(max_omega, max_gamma);

  const long n_steps = opt.n_steps();
  const auto checkpoints = detail::checkpoint_steps(n_steps, opt.n_checkpoints);
  const std::size_t n_modes = spec.modes.size();

  std::vector<detail::OneStep> steppers;
  steppers.reserve(n_modes);
  for (const auto& m : spec.modes)
    steppers.push_back(detail::make_step(m, opt.dt, opt.stepper));

  std::vector<std::vector<detail::MeanVar>> occ(
      n_modes, std::vector<detail::MeanVar>(checkpoints.size()));
  const std::size_t n_pairs = n_modes * (n_modes - 1) / 2;
  std::vector<detail::MeanVar> cross_re(n_pairs), cross_im(n_pairs);

  std::vector<std::complex<double>> z(n_modes);
  for (int traj = 0; traj < opt.n_traj; ++traj) {
    detail::Rng rng{detail::substream_seed(spec.seed, static_cast<std::uint64_t>(traj))};
    for (std::size_t j = 0; j < n_modes; ++j)
      z[j] = detail::initial_amplitude(spec.modes[j], rng);

    std::size_t next_cp = 0;
    for (long step = 0; step <= n_steps; ++step) {
      if (next_cp < checkpoints.size() && checkpoints[next_cp] == step) {
        for (std::size_t j = 0; j < n_modes; ++j)
          occ[j][next_cp].add(std::norm(z[j]));
        ++next_cp;
      }
      if (step == n_steps) break;
      for (std::size_t j = 0; j < n_modes; ++j)
        z[j] = steppers[j].factor * z[j] +
               steppers[j].noise_std * rng.next_complex_normal();
    }
    std::size_t pair = 0;
    for (std::size_t i = 0; i < n_modes; ++i)
      for (std::size_t j = i + 1; j < n_modes; ++j, ++pair) {
        const std::complex<double> c = std::conj(z[i]) * z[j];
        cross_re[pair].add(c.real());
        cross_im[pair].add(c.imag());
      }
  }

  TrajectoryEnsemble out;
  out.n_traj = opt.n_traj;
  out.dt = opt.dt;
  out.horizon = opt.horizon;
  for (const auto& m : spec.modes) out.mode_names.push_back(m.name);
  out.occupation.resize(n_modes);
  for (std::size_t j = 0; j < n_modes; ++j) {
    auto& s = out.occupation[j];
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
      s.t.push_back(checkpoints[k] * opt.dt);
      s.mean.push_back(occ[j][k].mean());
      s.se.push_back(occ[j][k].se());
    }
  }
  std::size_t pair = 0;
  for (std::size_t i = 0; i < n_modes; ++i)
    for (std::size_t j = i + 1; j < n_modes; ++j, ++pair)
      out.cross_final.push_back({spec.modes[i].name + "*" + spec.modes[j].name,
                                 cross_re[pair].mean(), cross_re[pair].se(),
                                 cross_im[pair].mean(), cross_im[pair].se()});
  return out;
}

/// Hopfield-weighted effective damping of a polariton branch:
/// gamma_eff = |X_a|^2 gamma0 + (|X_c|^2 + |X_d|^2) gamma_m.  Reduces to the
/// bare rates in the uncoupled limits; the paper leaves gamma_eff open, this
/// closure weights the reservoirs by mode content.
inline double effective_damping(const spectrum::PolaritonSpectrum& spec,
                                spectrum::Branch branch, double gamma_photon,
                                double gamma_phonon) {
  const auto w = spec.weights(branch);
  return w[0] * w[0] * gamma_photon +
         (w[1] * w[1] + w[2] * w[2]) * gamma_phonon;
}

struct PolaritonMode {
  double omega;      // branch frequency
  double gamma_eff;
  double nbar_eff;   // fluctuation-dissipation occupation of the branch
  double initial_occupation = 0.0;
  InitKind init = InitKind::thermal;
};

/// Builds the effective single-mode description of one branch at a given
/// detuning from the physical parameters.
inline PolaritonMode polariton_mode(const spectrum::CouplingMatrix& m,
                                    const thermo::BathSpec& baths,
                                    spectrum::Branch branch = spectrum::Branch::A) {
  const auto spec = spectrum::polariton_spectrum(m);
  PolaritonMode out;
  out.omega = spec.branch_frequency(branch);
  out.gamma_eff = effective_damping(spec, branch, baths.gamma_photon,
                                    baths.gamma_phonon);
  out.nbar_eff = thermo::polariton_occupation(
      spec, branch, thermo::bath_occupations(m, baths));
  return out;
}

/// OU simulation of one polariton branch.
inline TrajectoryEnsemble simulate_polariton(const PolaritonMode& mode,
                                             const SimOptions& opt,
                                             std::uint64_t seed) {
  NoiseSpec spec;
  spec.seed = seed;
  spec.modes.push_back({"A", mode.omega, mode.gamma_eff, mode.nbar_eff,
                        mode.initial_occupation, mode.init});
  return simulate_bare(spec, opt);
}

// ---------------------------------------------------------------------------
// Heat and work along a frequency schedule.  Each step is split into an
// isochoric segment (evolution at fixed omega; the energy change is heat)
// followed by a frequency update with the state frozen (the energy change is
// work, dW = -<|z|^2> d(omega)).  The first law E(T) - E(0) = Q - W then
// closes pathwise by construction, and the ensemble statistics carry honest
// standard errors.

struct Schedule {
  std::function<double(double)> omega;

  static Schedule constant(double w) {
    return {[w](double) { return w; }};
  }
  static Schedule linear_ramp(double w0, double w1, double tau) {
    return {[w0, w1, tau](double t) { return w0 + (w1 - w0) * t / tau; }};
  }
  /// Piecewise-linear schedule through (t, omega) samples.
  static Schedule from_samples(std::vector<std::pair<double, double>> pts) {
    if (pts.size() < 2)
      throw ValidationError("Schedule: need at least two samples");
    return {[pts = std::move(pts)](double t) {
      if (t <= pts.front().first) return pts.front().second;
      if (t >= pts.back().first) return pts.back().second;
      auto it = std::upper_bound(pts.begin(), pts.end(), t,
                                 [](double v, const auto& p) { return v < p.first; });
      const auto& [t1, w1] = *it;
      const auto& [t0, w0] = *(it - 1);
      return w0 + (w1 - w0) * (t - t0) / (t1 - t0);
    }};
  }
};

struct ScheduleResult {
  std::vector<double> t;        // checkpoint times
  SeriesStats occupation;
  // Interval-averaged rates over (t_{k-1}, t_k]; entry 0 is zero.
  SeriesStats work_rate, heat_rate, energy_rate;
  double total_work_mean = 0, total_work_se = 0;
  double total_heat_mean = 0, total_heat_se = 0;
  double energy_change_mean = 0, energy_change_se = 0;
  double first_law_residual_mean = 0, first_law_residual_se = 0;
};

inline ScheduleResult simulate_schedule(const Schedule& schedule,
                                        double gamma_eff, double nbar_eff,
                                        double initial_occupation, InitKind init,
                                        const SimOptions& opt,
                                        std::uint64_t seed) {
  if (!(gamma_eff > 0.0) || nbar_eff < 0.0 || initial_occupation < 0.0)
    throw ValidationError("simulate_schedule: bad mode parameters");
  const long n_steps = opt.n_steps();

  std::vector<double> omega_at(static_cast<std::size_t>(n_steps) + 1);
  double max_omega = 0.0;
  for (long k = 0; k <= n_steps; ++k) {
    omega_at[static_cast<std::size_t>(k)] = schedule.omega(k * opt.dt);
    max_omega = std::max(max_omega, std::abs(omega_at[static_cast<std::size_t>(k)]));
  }
  opt.validate(max_omega, gamma_eff);

  const auto checkpoints = detail::checkpoint_steps(n_steps, opt.n_checkpoints);
  const std::size_t n_cp = checkpoints.size();

  std::vector<detail::MeanVar> occ(n_cp);
  std::vector<detail::MeanVar> dW(n_cp), dQ(n_cp), dE(n_cp);
  detail::MeanVar W_tot, Q_tot, E_chg, residual;

  const double decay = std::exp(-0.5 * gamma_eff * opt.dt);
  const double exact_std = std::sqrt(0.5 * nbar_eff * (1.0 - decay * decay));
  const double em_std = std::sqrt(0.5 * gamma_eff * nbar_eff * opt.dt);

  for (int traj = 0; traj < opt.n_traj; ++traj) {
    detail::Rng rng{detail::substream_seed(seed, static_cast<std::uint64_t>(traj))};
    ModeNoise init_mode{"", 0.0, gamma_eff, nbar_eff, initial_occupation, init};
    std::complex<double> z = detail::initial_amplitude(init_mode, rng);

    double work = 0.0, heat = 0.0;
    double cp_work = 0.0, cp_heat = 0.0, cp_energy = std::norm(z) * omega_at[0];
    const double e0 = cp_energy;
    std::size_t next_cp = 0;

    for (long step = 0; step <= n_steps; ++step) {
      if (next_cp < n_cp && checkpoints[next_cp] == step) {
        const double e_here = std::norm(z) * omega_at[static_cast<std::size_t>(step)];
        occ[next_cp].add(std::norm(z));
        if (next_cp > 0) {
          const double span =
              (checkpoints[next_cp] - checkpoints[next_cp - 1]) * opt.dt;
          dW[next_cp].add((work - cp_work) / span);
          dQ[next_cp].add((heat - cp_heat) / span);
          dE[next_cp].add((e_here - cp_energy) / span);
        }
        cp_work = work;
        cp_heat = heat;
        cp_energy = e_here;
        ++next_cp;
      }
      if (step == n_steps) break;

      const double w_now = omega_at[static_cast<std::size_t>(step)];
      const double w_next = omega_at[static_cast<std::size_t>(step) + 1];
      const double n_before = std::norm(z);
      if (opt.stepper == Stepper::exact_exponential) {
        z = std::polar(decay, w_now * opt.dt) * z +
            exact_std * rng.next_complex_normal();
      } else {
        z += std::complex<double>(-0.5 * gamma_eff, w_now) * z * opt.dt +
             em_std * rng.next_complex_normal();
      }
      const double n_after = std::norm(z);
      heat += w_now * (n_after - n_before);
      work += -(w_next - w_now) * n_after;
    }

    const double e_final = std::norm(z) * omega_at[static_cast<std::size_t>(n_steps)];
    W_tot.add(work);
    Q_tot.add(heat);
    E_chg.add(e_final - e0);
    residual.add(e_final - e0 - heat + work);
  }

  ScheduleResult out;
  for (std::size_t k = 0; k < n_cp; ++k) {
    const double t = checkpoints[k] * opt.dt;
    out.t.push_back(t);
    out.occupation.t.push_back(t);
    out.occupation.mean.push_back(occ[k].mean());
    out.occupation.se.push_back(occ[k].se());
    for (auto [series, acc] : {std::pair{&out.work_rate, &dW[k]},
                               std::pair{&out.heat_rate, &dQ[k]},
                               std::pair{&out.energy_rate, &dE[k]}}) {
      series->t.push_back(t);
      series->mean.push_back(acc->mean());
      series->se.push_back(acc->se());
    }
  }
  out.total_work_mean = W_tot.mean();
  out.total_work_se = W_tot.se();
  out.total_heat_mean = Q_tot.mean();
  out.total_heat_se = Q_tot.se();
  out.energy_change_mean = E_chg.mean();
  out.energy_change_se = E_chg.se();
  out.first_law_residual_mean = residual.mean();
  out.first_law_residual_se = residual.se();
  return out;
}

// ---------------------------------------------------------------------------
// Steady-state power spectrum.  The OU line is a Lorentzian centered at the
// mode frequency with half-width gamma/2 (Wiener-Khinchin).

namespace detail {

/// In-place iterative radix-2 FFT (n must be a power of two).
inline void fft(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw ValidationError("fft: length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * constants::pi / static_cast<double>(len);
    const std::complex<double> wl = std::polar(1.0, ang);
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w{1.0, 0.0};
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

}  // namespace detail

struct Periodogram {
  std::vector<double> omega;  // angular frequency bins, ascending
  std::vector<double> power;  // ensemble-averaged periodogram
  double peak_omega = 0.0;
  double half_width = 0.0;    // HWHM estimate
};

/// Ensemble-averaged periodogram of stationary trajectories, with peak and
/// half-width read off by half-power crossings.  smooth_window (odd, in bins)
/// applies a moving average before the crossing search.
inline Periodogram steady_periodogram(double omega, double gamma, double nbar,
                                      double dt, int n_samples, int n_traj,
                                      std::uint64_t seed, int smooth_window = 1) {
  if (n_samples < 8 || (n_samples & (n_samples - 1)) != 0)
    throw ValidationError("steady_periodogram: n_samples must be a power of two");
  if (!(nbar > 0.0)) throw ValidationError("steady_periodogram: nbar must be > 0");
  SimOptions guard_check;
  guard_check.dt = dt;
  guard_check.horizon = dt * n_samples;
  guard_check.validate(omega, gamma);

  const std::size_t n = static_cast<std::size_t>(n_samples);
  const double decay = std::exp(-0.5 * gamma * dt);
  const std::complex<double> factor = std::polar(decay, omega * dt);
  const double noise_std = std::sqrt(0.5 * nbar * (1.0 - decay * decay));

  std::vector<double> power(n, 0.0);
  std::vector<std::complex<double>> record(n);
  for (int traj = 0; traj < n_traj; ++traj) {
    detail::Rng rng{detail::substream_seed(seed, static_cast<std::uint64_t>(traj))};
    // Stationary start: draw from the steady-state distribution.
    std::complex<double> z = std::sqrt(0.5 * nbar) * rng.next_complex_normal();
    for (std::size_t k = 0; k < n; ++k) {
      record[k] = z;
      z = factor * z + noise_std * rng.next_complex_normal();
    }
    detail::fft(record);
    for (std::size_t k = 0; k < n; ++k)
      power[k] += std::norm(record[k]) * dt / static_cast<double>(n);
  }
  for (auto& p : power) p /= static_cast<double>(n_traj);

  // Reorder to ascending angular frequency (fftshift).
  Periodogram out;
  out.omega.resize(n);
  out.power.resize(n);
  const double domega = 2.0 * constants::pi / (dt * static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const long signed_idx = static_cast<long>(k) - static_cast<long>(n / 2);
    const std::size_t src = (k + n / 2) % n;
    out.omega[k] = static_cast<double>(signed_idx) * domega;
    out.power[k] = power[src];
  }

  std::vector<double> smooth = out.power;
  if (smooth_window > 1) {
    const int half = smooth_window / 2;
    for (std::size_t k = 0; k < n; ++k) {
      double acc = 0.0;
      int cnt = 0;
      for (int d = -half; d <= half; ++d) {
        const long idx = static_cast<long>(k) + d;
        if (idx < 0 || idx >= static_cast<long>(n)) continue;
        acc += out.power[static_cast<std::size_t>(idx)];
        ++cnt;
      }
      smooth[k] = acc / cnt;
    }
  }

  const auto peak_it = std::max_element(smooth.begin(), smooth.end());
  const std::size_t peak = static_cast<std::size_t>(peak_it - smooth.begin());
  out.peak_omega = out.omega[peak];
  const double half_power = 0.5 * smooth[peak];

  auto crossing = [&](long dir) -> double {
    long k = static_cast<long>(peak);
    while (k + dir >= 0 && k + dir < static_cast<long>(n) &&
           smooth[static_cast<std::size_t>(k + dir)] > half_power)
      k += dir;
    const long k2 = k + dir;
    if (k2 < 0 || k2 >= static_cast<long>(n)) return out.omega[static_cast<std::size_t>(k)];
    const double p1 = smooth[static_cast<std::size_t>(k)];
    const double p2 = smooth[static_cast<std::size_t>(k2)];
    const double frac = (p1 - half_power) / (p1 - p2);
    return out.omega[static_cast<std::size_t>(k)] +
           frac * (out.omega[static_cast<std::size_t>(k2)] - out.omega[static_cast<std::size_t>(k)]);
  };
  const double left = crossing(-1);
  const double right = crossing(+1);
  out.half_width = 0.5 * (right - left);
  return out;
}

}  // namespace polotto::langevin
