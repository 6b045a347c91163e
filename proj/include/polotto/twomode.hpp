#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "polotto/errors.hpp"
#include "polotto/thermo.hpp"

// Adiabatic elimination of the fast c-sidemode.  When 0 < -Dbar << omega_c
// the c mode follows the cavity field instantaneously, c ~ -(G/omega_c) a,
// leaving a beam-splitter Hamiltonian for (a, d) with the shifted detuning
// Dbar_eff = Dbar + G^2/omega_c and the two polariton branches
//   Omega_+- = (omega_d - Dbar_eff)/2 +- sqrt((omega_d + Dbar_eff)^2/4 + G^2).
// Residual Stokes (squeezing) processes are dropped; they perturb the
// efficiency at O(G/omega_c) in a realistic device.

namespace polotto::twomode {

using thermo::BathSpec;
using thermo::CycleResult;
using thermo::NotAnEngineError;

struct TwoModeGuard {
  double detuning_max_ratio = 0.2;  // require -Dbar < ratio * omega_c
  double coupling_max_ratio = 0.2;  // require G < ratio * omega_c
};

struct TwoModeParams {
  double neg_detuning;      // -Dbar
  double neg_detuning_eff;  // -Dbar_eff = -Dbar - G^2/omega_c
  double omega_d;
  double omega_c;           // eliminated mode; enters only validity and shift
  double coupling;
};

/// Eliminates the fast sidemode and returns the effective two-mode
/// parameters.  Throws ValidityError outside the timescale-separation regime.
inline TwoModeParams eliminate_c(double neg_detuning, double omega_c,
                                 double omega_d, double coupling,
                                 const TwoModeGuard& guard = {}) {
  if (!(omega_c > 0.0) || !(omega_d > 0.0) || !(coupling >= 0.0))
    throw ValidationError("eliminate_c: need omega_c, omega_d > 0 and G >= 0");
  if (!(neg_detuning > 0.0) ||
      !(neg_detuning < guard.detuning_max_ratio * omega_c) ||
      !(coupling < guard.coupling_max_ratio * omega_c))
    throw ValidityError(
        "eliminate_c: timescale separation requires 0 < -Dbar << omega_c and "
        "G << omega_c (got -Dbar = " + std::to_string(neg_detuning) +
        ", G = " + std::to_string(coupling) + ", omega_c = " +
        std::to_string(omega_c) + "); neglected corrections are O(G/omega_c) = " +
        std::to_string(coupling / omega_c) + ", O(omega_d/omega_c) = " +
        std::to_string(omega_d / omega_c) + ", O(-Dbar/omega_c) = " +
        std::to_string(neg_detuning / omega_c));
  TwoModeParams p;
  p.neg_detuning = neg_detuning;
  p.neg_detuning_eff = neg_detuning - coupling * coupling / omega_c;
  p.omega_d = omega_d;
  p.omega_c = omega_c;
  p.coupling = coupling;
  return p;
}

/// Lower/upper branch frequencies (Omega_-, Omega_+) of the effective
/// two-mode problem.
inline std::pair<double, double> two_mode_frequencies(const TwoModeParams& p) {
  const double dbar_eff = -p.neg_detuning_eff;
  const double half_sum = 0.5 * (p.omega_d - dbar_eff);
  const double half_gap = 0.5 * (p.omega_d + dbar_eff);
  const double rad = std::sqrt(half_gap * half_gap + p.coupling * p.coupling);
  return {half_sum - rad, half_sum + rad};
}

/// Unit-norm (Y_a, Y_d) mixing weights of one branch, gauge Y_a > 0;
/// the eliminated c mode carries no weight.
inline std::array<double, 2> two_mode_weights(const TwoModeParams& p,
                                              bool lower) {
  const auto [minus, plus] = two_mode_frequencies(p);
  const double omega_j = lower ? minus : plus;
  if (p.coupling == 0.0) {
    // Decoupled: branches are the bare (a, d) modes.
    const bool a_is_lower = -p.neg_detuning_eff < p.omega_d;
    const bool is_a = (lower == a_is_lower);
    return {is_a ? 1.0 : 0.0, is_a ? 0.0 : 1.0};
  }
  if (std::abs(omega_j - p.omega_d) < 1e-12)
    throw SingularWeightError(
        "two_mode_weights: branch frequency coincides with omega_d");
  const double yd = p.coupling / (omega_j - p.omega_d);
  const double norm = std::sqrt(1.0 + yd * yd);
  return {1.0 / norm, yd / norm};
}

/// Thermal occupation of a two-mode branch; mirrors the three-mode
/// Hopfield-weighted form restricted to (a, d) content.
inline double two_mode_occupation(const TwoModeParams& p, bool lower,
                                  double n_a, double n_d) {
  const auto w = two_mode_weights(p, lower);
  return w[0] * w[0] * n_a + w[1] * w[1] * n_d;
}

/// Otto cycle tracking the lower two-mode branch:
/// eta = 1 - Omega_-(-Dbar_f) / Omega_-(-Dbar_i).
inline CycleResult two_mode_otto(double neg_detuning_i, double neg_detuning_f,
                                 double omega_c, double omega_d,
                                 double coupling, const BathSpec& baths,
                                 const TwoModeGuard& guard = {}) {
  baths.validate();
  if (!(neg_detuning_i > neg_detuning_f) || !(neg_detuning_f > 0.0))
    throw ValidationError("two_mode_otto: need -Dbar_i > -Dbar_f > 0");
  const TwoModeParams p_i =
      eliminate_c(neg_detuning_i, omega_c, omega_d, coupling, guard);
  const TwoModeParams p_f =
      eliminate_c(neg_detuning_f, omega_c, omega_d, coupling, guard);

  CycleResult r;
  r.omega_i = two_mode_frequencies(p_i).first;
  r.omega_f = two_mode_frequencies(p_f).first;
  // Endpoint i thermalizes against the phonon reservoir (photon occupation
  // zero at optical frequencies); endpoint f against the photon vacuum.
  const double n_d_eq = thermo::bose_occupation(omega_d, baths.theta_phonon);
  r.n_i = two_mode_occupation(p_i, true, 0.0, n_d_eq);
  r.n_f = 0.0;
  const double dn = r.n_i - r.n_f;
  r.work = (r.omega_i - r.omega_f) * dn;
  r.q_in = r.omega_i * dn;
  r.q_out = -r.omega_f * dn;
  r.eta = 1.0 - r.omega_f / r.omega_i;
  r.engine = r.work > 0.0;
  if (!r.engine)
    throw NotAnEngineError("two_mode_otto: work = " + std::to_string(r.work) +
                           " <= 0", r);
  return r;
}

}  // namespace polotto::twomode
