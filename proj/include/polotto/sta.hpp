#pragma once

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "polotto/constants.hpp"
#include "polotto/errors.hpp"
#include "polotto/spectrum.hpp"

// Shortcut-to-adiabaticity protocols for the isentropic strokes.  A scaling
// function rho(t) obeying
//
//   rho'' + Omega(t)^2 rho = Omega_i^2 / rho^3
//
// with rho(0)=1, rho'(0)=rho''(0)=0, rho(tau)=sqrt(Omega_i/Omega_f),
// rho'(tau)=rho''(tau)=0 transports instantaneous-basis populations exactly.
// Choosing rho(t) and inverting gives the frequency protocol
// Omega(t)^2 = Omega_i^2/rho^4 - rho''/rho, and the detuning protocol follows
// by inverting the branch-A dispersion.

namespace polotto::sta {

enum class RhoAnsatz { polynomial, trigonometric };

struct RhoPoint {
  double rho, rho_dot, rho_ddot;
};

namespace detail {

inline double boundary_gap(double omega_i, double omega_f) {
  if (!(omega_i > 0.0) || !(omega_f > 0.0))
    throw ValidationError("sta: endpoint frequencies must be > 0");
  return std::sqrt(omega_i / omega_f) - 1.0;
}

inline void check_time(double t, double tau) {
  if (!(tau > 0.0)) throw ValidationError("sta: tau must be > 0");
  if (t < 0.0 || t > tau)
    throw DomainError("sta: t = " + std::to_string(t) +
                      " outside the stroke [0, " + std::to_string(tau) + "]");
}

}  // namespace detail

/// Quintic-smoothstep ansatz rho_1(t) = 1 + b (10 s^3 - 15 s^4 + 6 s^5),
/// s = t/tau, b = sqrt(Omega_i/Omega_f) - 1.  Analytic derivatives.
inline RhoPoint rho_polynomial(double t, double tau, double omega_i,
                               double omega_f) {
  detail::check_time(t, tau);
  const double b = detail::boundary_gap(omega_i, omega_f);
  const double s = t / tau;
  RhoPoint p;
  p.rho = 1.0 + b * s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
  p.rho_dot = b * s * s * (30.0 + s * (-60.0 + 30.0 * s)) / tau;
  p.rho_ddot = b * s * (60.0 + s * (-180.0 + 120.0 * s)) / (tau * tau);
  return p;
}

/// Cosine-series ansatz rho_2(t) = 1 + b [1/2 - 9/16 cos(pi s) + 1/16 cos(3 pi s)].
inline RhoPoint rho_trigonometric(double t, double tau, double omega_i,
                                  double omega_f) {
  detail::check_time(t, tau);
  const double b = detail::boundary_gap(omega_i, omega_f);
  const double s = t / tau;
  const double pi = constants::pi;
  RhoPoint p;
  p.rho = 1.0 + b * (0.5 - 9.0 / 16.0 * std::cos(pi * s) +
                     1.0 / 16.0 * std::cos(3.0 * pi * s));
  p.rho_dot = b * (9.0 * pi / 16.0 * std::sin(pi * s) -
                   3.0 * pi / 16.0 * std::sin(3.0 * pi * s)) / tau;
  p.rho_ddot = b * (9.0 * pi * pi / 16.0 * std::cos(pi * s) -
                    9.0 * pi * pi / 16.0 * std::cos(3.0 * pi * s)) /
               (tau * tau);
  return p;
}

inline RhoPoint evaluate_rho(RhoAnsatz ansatz, double t, double tau,
                             double omega_i, double omega_f) {
  return ansatz == RhoAnsatz::polynomial
             ? rho_polynomial(t, tau, omega_i, omega_f)
             : rho_trigonometric(t, tau, omega_i, omega_f);
}

struct StaSample {
  double t;
  double rho, rho_dot, rho_ddot;
  double omega_sq;
  double neg_detuning = std::numeric_limits<double>::quiet_NaN();
};

struct StaProtocol {
  double tau;
  double omega_i, omega_f;
  RhoAnsatz ansatz;
  std::vector<StaSample> samples;
  bool feasible;            // min Omega^2 > 0 over the stroke
  double min_omega_sq;
  double min_omega_sq_time;

  /// Analytic Omega(t)^2 from the ansatz (not interpolated from samples).
  double omega_sq(double t) const {
    const RhoPoint p = evaluate_rho(ansatz, t, tau, omega_i, omega_f);
    return omega_i * omega_i / (p.rho * p.rho * p.rho * p.rho) -
           p.rho_ddot / p.rho;
  }
  double omega(double t) const { return std::sqrt(omega_sq(t)); }
};

/// Sampled protocol without the feasibility throw; used by feasibility
/// searches and by the CLI to report infeasible parameter choices.
inline StaProtocol try_omega_protocol(RhoAnsatz ansatz, double tau,
                                      double omega_i, double omega_f,
                                      int n_samples) {
  if (n_samples < 2) throw ValidationError("omega_protocol: n_samples >= 2");
  detail::boundary_gap(omega_i, omega_f);  // validates endpoint frequencies
  detail::check_time(0.0, tau);

  StaProtocol p;
  p.tau = tau;
  p.omega_i = omega_i;
  p.omega_f = omega_f;
  p.ansatz = ansatz;
  p.samples.reserve(static_cast<std::size_t>(n_samples));
  p.min_omega_sq = std::numeric_limits<double>::infinity();
  p.min_omega_sq_time = 0.0;

  for (int k = 0; k < n_samples; ++k) {
    const double t =
        std::min(tau, tau * (static_cast<double>(k) / (n_samples - 1)));
    const RhoPoint r = evaluate_rho(ansatz, t, tau, omega_i, omega_f);
    StaSample s;
    s.t = t;
    s.rho = r.rho;
    s.rho_dot = r.rho_dot;
    s.rho_ddot = r.rho_ddot;
    s.omega_sq = omega_i * omega_i / (r.rho * r.rho * r.rho * r.rho) -
                 r.rho_ddot / r.rho;
    if (s.omega_sq < p.min_omega_sq) {
      p.min_omega_sq = s.omega_sq;
      p.min_omega_sq_time = t;
    }
    p.samples.push_back(s);
  }
  p.feasible = p.min_omega_sq > 0.0;
  return p;
}

/// Ermakov-Pinney inversion of the chosen ansatz.  Throws
/// InfeasibleProtocolError when Omega^2 dips non-positive (stroke too fast);
/// the error carries the minimum and its location.
inline StaProtocol omega_protocol(RhoAnsatz ansatz, double tau, double omega_i,
                                  double omega_f, int n_samples) {
  StaProtocol p = try_omega_protocol(ansatz, tau, omega_i, omega_f, n_samples);
  if (!p.feasible)
    throw InfeasibleProtocolError(
        "omega_protocol: min Omega^2 = " + std::to_string(p.min_omega_sq) +
        " at t = " + std::to_string(p.min_omega_sq_time) +
        "; stroke duration too short", p.min_omega_sq, p.min_omega_sq_time);
  return p;
}

/// Smallest stroke duration keeping Omega^2 > 0, by bisection on tau with a
/// dense feasibility scan.
inline double min_feasible_tau(RhoAnsatz ansatz, double omega_i, double omega_f,
                               double tau_lo = 1e-4, double tau_hi = 1e3,
                               int n_scan = 10000) {
  auto feasible = [&](double tau) {
    return try_omega_protocol(ansatz, tau, omega_i, omega_f, n_scan).feasible;
  };
  if (feasible(tau_lo)) return tau_lo;
  if (!feasible(tau_hi))
    throw InfeasibleProtocolError("min_feasible_tau: no feasible tau in bracket",
                                  0.0, 0.0);
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (tau_lo + tau_hi);
    (feasible(mid) ? tau_hi : tau_lo) = mid;
  }
  return 0.5 * (tau_lo + tau_hi);
}

/// Inverts the branch-A dispersion omega_A(-Dbar) = Omega(t) per sample by
/// bisection (omega_A is monotone increasing in -Dbar).  The neg_detuning
/// field of `params` is ignored; only (omega_c, omega_d, coupling) enter.
inline StaProtocol detuning_protocol(StaProtocol protocol,
                                     const spectrum::CouplingMatrix& params) {
  if (!protocol.feasible)
    throw InfeasibleProtocolError("detuning_protocol: protocol infeasible",
                                  protocol.min_omega_sq,
                                  protocol.min_omega_sq_time);
  auto omega_A = [&](double neg_detuning) {
    spectrum::CouplingMatrix m = params;
    m.neg_detuning = neg_detuning;
    return spectrum::branch_A_frequency(m);
  };

  const double lo_bracket = 1e-6;
  const double hi_bracket = 1e3 * std::max(params.omega_c, params.omega_d);
  const double omega_hi = omega_A(hi_bracket);
  const double omega_lo = omega_A(lo_bracket);

  for (auto& s : protocol.samples) {
    const double target = std::sqrt(s.omega_sq);
    if (!(target > 0.0) || target <= omega_lo || target >= omega_hi)
      throw UnattainableFrequencyError(
          "detuning_protocol: Omega = " + std::to_string(target) +
          " at t = " + std::to_string(s.t) +
          " outside the attainable branch-A range (" +
          std::to_string(omega_lo) + ", " + std::to_string(omega_hi) +
          "); near -Dbar = 0 the lowest branch is negative");
    double lo = lo_bracket, hi = hi_bracket;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (omega_A(mid) < target ? lo : hi) = mid;
    }
    s.neg_detuning = 0.5 * (lo + hi);
  }
  return protocol;
}

/// Mean oscillator energy in the n-th state along the stroke, in hbar*gamma0:
/// E_n(t) = (2n+1)/(4 Omega_i) (rho'^2 + Omega^2 rho^2 + Omega_i^2/rho^2).
struct MeanEnergySample {
  double t;
  double value;
};

inline std::vector<MeanEnergySample> mean_energy(const StaProtocol& p, int n) {
  if (n < 0) throw ValidationError("mean_energy: n must be >= 0");
  std::vector<MeanEnergySample> out;
  out.reserve(p.samples.size());
  const double pref = (2.0 * n + 1.0) / (4.0 * p.omega_i);
  for (const auto& s : p.samples) {
    const double val = pref * (s.rho_dot * s.rho_dot +
                               s.omega_sq * s.rho * s.rho +
                               p.omega_i * p.omega_i / (s.rho * s.rho));
    out.push_back({s.t, val});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Husimi adiabaticity parameter from the two fundamental solutions of
// x'' + Omega(t)^2 x = 0: X(0)=1, X'(0)=0 and Y(0)=0, Y'(0)=1.
//   Q* = [Omega_i^2 (Omega_f^2 Y^2 + Y'^2) + (Omega_f^2 X^2 + X'^2)]
//        / (2 Omega_i Omega_f)   at t = tau.
// Q* = 1 iff the stroke is population-preserving.

inline double adiabaticity_parameter(const std::function<double(double)>& omega_sq,
                                     double tau, double omega_i, double omega_f) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 4>;

  auto rhs = [&](const State& y, State& dydt, double t) {
    const double o2 = omega_sq(t);
    dydt[0] = y[1];
    dydt[1] = -o2 * y[0];
    dydt[2] = y[3];
    dydt[3] = -o2 * y[2];
  };
  State y{1.0, 0.0, 0.0, 1.0};
  try {
    auto stepper = ode::make_controlled(1e-13, 1e-13,
                                        ode::runge_kutta_dopri5<State>());
    ode::integrate_adaptive(stepper, rhs, y, 0.0, tau, tau / 256.0);
  } catch (const std::exception& e) {
    throw IntegrationError(std::string("adiabaticity_parameter: ") + e.what());
  }
  const double wronskian = y[0] * y[3] - y[2] * y[1];
  if (std::abs(wronskian - 1.0) > 1e-8)
    throw IntegrationError("adiabaticity_parameter: Wronskian drifted to " +
                           std::to_string(wronskian));
  const double of2 = omega_f * omega_f;
  return (omega_i * omega_i * (of2 * y[2] * y[2] + y[3] * y[3]) +
          (of2 * y[0] * y[0] + y[1] * y[1])) /
         (2.0 * omega_i * omega_f);
}

/// Q* of an STA protocol, using the analytic ansatz frequency (no
/// interpolation error).
inline double adiabaticity_parameter(const StaProtocol& p) {
  return adiabaticity_parameter([&](double t) { return p.omega_sq(t); }, p.tau,
                                p.omega_i, p.omega_f);
}

/// Q* from uniform Omega samples over [0, tau]; cubic Hermite interpolation.
/// Requires at least 20 samples per period of the fastest oscillation.
inline double adiabaticity_parameter(std::span<const double> omega_samples,
                                     double tau) {
  const std::size_t n = omega_samples.size();
  if (n < 2) throw ValidationError("adiabaticity_parameter: need >= 2 samples");
  double omega_max = 0.0;
  for (double w : omega_samples) {
    if (!(w > 0.0))
      throw ValidationError("adiabaticity_parameter: samples must be > 0");
    omega_max = std::max(omega_max, w);
  }
  const double h = tau / static_cast<double>(n - 1);
  if (h > 2.0 * constants::pi / omega_max / 20.0)
    throw ValidationError(
        "adiabaticity_parameter: sampling too coarse for the fastest "
        "oscillation (need >= 20 samples per period)");

  auto interp = [omega_samples, h, n](double t) {
    const double x = t / h;
    std::size_t k = std::min(static_cast<std::size_t>(std::max(0.0, x)), n - 2);
    const double s = x - static_cast<double>(k);
    auto slope = [&](std::size_t i) {
      if (i == 0) return (omega_samples[1] - omega_samples[0]) / h;
      if (i == n - 1) return (omega_samples[n - 1] - omega_samples[n - 2]) / h;
      return (omega_samples[i + 1] - omega_samples[i - 1]) / (2.0 * h);
    };
    const double y0 = omega_samples[k], y1 = omega_samples[k + 1];
    const double m0 = slope(k) * h, m1 = slope(k + 1) * h;
    const double s2 = s * s, s3 = s2 * s;
    const double w = (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * m0 +
                     (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * m1;
    return w * w;
  };
  return adiabaticity_parameter(interp, tau, omega_samples.front(),
                                omega_samples.back());
}

}  // namespace polotto::sta
