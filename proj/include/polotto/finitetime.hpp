#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "polotto/errors.hpp"
#include "polotto/thermo.hpp"

// Finite-duration isochores: the branch occupation relaxes only partway
// toward each reservoir equilibrium, n(tau) = n_eq + (n_start - n_eq) e^{-g tau}.
// Under steady repetition the cycle settles into a limit cycle whose corner
// occupations follow from a one-dimensional affine fixed point.  Work and
// heats shrink with incomplete thermalization, but their ratio — the
// efficiency — is untouched: the occupation contrast cancels.

namespace polotto::finitetime {

using thermo::CycleResult;
using thermo::NotAnEngineError;
using thermo::OttoCycleSpec;

/// Exponential relaxation toward a bath equilibrium over a finite isochore.
inline double isochore_relax(double n_start, double n_eq, double gamma,
                             double tau) {
  if (!(gamma > 0.0)) throw ValidationError("isochore_relax: gamma must be > 0");
  if (tau < 0.0) throw ValidationError("isochore_relax: tau must be >= 0");
  if (n_start < 0.0 || n_eq < 0.0)
    throw ValidationError("isochore_relax: occupations must be >= 0");
  return n_eq + (n_start - n_eq) * std::exp(-gamma * tau);
}

struct FiniteCycleSpec {
  OttoCycleSpec ideal;
  double tau_bc;  // photon-bath isochore duration, 1/gamma0 units
  double tau_da;  // phonon-bath isochore duration
  // Relaxation rates on the two isochores; default to the bare reservoir
  // rates.  A Hopfield-weighted effective damping may be supplied instead.
  std::optional<double> gamma_photon_side;
  std::optional<double> gamma_phonon_side;

  double rate_photon_side() const {
    return gamma_photon_side.value_or(ideal.baths.gamma_photon);
  }
  double rate_phonon_side() const {
    return gamma_phonon_side.value_or(ideal.baths.gamma_phonon);
  }

  void validate() const {
    ideal.validate();
    if (tau_bc < 0.0 || tau_da < 0.0)
      throw ValidationError("FiniteCycleSpec: isochore durations must be >= 0");
    if (!(rate_photon_side() > 0.0) || !(rate_phonon_side() > 0.0))
      throw ValidationError("FiniteCycleSpec: relaxation rates must be > 0");
  }
};

/// Corner occupations of the steady (limit) cycle.  Corners follow the
/// stroke order a -> b (isentrope), b -> c (photon isochore),
/// c -> d (isentrope), d -> a (phonon isochore).
struct LimitCycleState {
  double n_corner_a;
  double n_corner_b;
  double n_corner_c;
  double n_corner_d;
  bool converged;
};

namespace detail {

/// Affine fixed point of one cycle of the occupation map.  The isentropes
/// transport populations unchanged, so with u = e^{-g_ph tau_bc},
/// v = e^{-g_m tau_da}:
///   n_a* = [n_i_eq (1 - v) + n_f_eq v (1 - u)] / (1 - u v).
inline LimitCycleState limit_cycle_endpoints(double n_i_eq, double n_f_eq,
                                             double u, double v) {
  if (u >= 1.0 && v >= 1.0)
    throw DegenerateMapError(
        "limit_cycle: both isochores have zero duration; every occupation is "
        "a fixed point and no heat is exchanged");
  LimitCycleState s;
  s.n_corner_a = (n_i_eq * (1.0 - v) + n_f_eq * v * (1.0 - u)) / (1.0 - u * v);
  s.n_corner_b = s.n_corner_a;
  s.n_corner_c = n_f_eq + (s.n_corner_b - n_f_eq) * u;
  s.n_corner_d = s.n_corner_c;
  s.converged = true;
  return s;
}

/// Endpoint data shared by the three-mode and two-mode engines.
struct CycleEndpoints {
  double omega_i, omega_f;
  double n_i_eq, n_f_eq;
};

inline CycleResult finite_cycle_from_endpoints(const CycleEndpoints& e,
                                               const LimitCycleState& s) {
  CycleResult r;
  r.omega_i = e.omega_i;
  r.omega_f = e.omega_f;
  r.n_i = s.n_corner_a;
  r.n_f = s.n_corner_c;
  const double dn = r.n_i - r.n_f;
  r.work = (r.omega_i - r.omega_f) * dn;
  r.q_in = r.omega_i * dn;
  r.q_out = -r.omega_f * dn;
  r.eta = 1.0 - r.omega_f / r.omega_i;
  r.engine = r.work > 0.0;
  return r;
}

}  // namespace detail

/// Steady-repetition corner occupations for the configured cycle.
inline LimitCycleState limit_cycle(const FiniteCycleSpec& spec) {
  spec.validate();
  const CycleResult ideal = thermo::evaluate_cycle(spec.ideal);
  const double u = std::exp(-spec.rate_photon_side() * spec.tau_bc);
  const double v = std::exp(-spec.rate_phonon_side() * spec.tau_da);
  return detail::limit_cycle_endpoints(ideal.n_i, ideal.n_f, u, v);
}

/// Cycle energetics at the limit cycle.  W and Q_in shrink relative to the
/// ideal cycle but eta stays exactly 1 - Omega_f/Omega_i.
inline CycleResult finite_cycle(const FiniteCycleSpec& spec) {
  spec.validate();
  const CycleResult ideal = thermo::evaluate_cycle(spec.ideal);
  const double u = std::exp(-spec.rate_photon_side() * spec.tau_bc);
  const double v = std::exp(-spec.rate_phonon_side() * spec.tau_da);
  const LimitCycleState s = detail::limit_cycle_endpoints(ideal.n_i, ideal.n_f, u, v);

  CycleResult r = detail::finite_cycle_from_endpoints(
      {ideal.omega_i, ideal.omega_f, ideal.n_i, ideal.n_f}, s);
  r.warnings = ideal.warnings;
  if (spec.tau_da > 1.0 / spec.ideal.baths.gamma_phonon)
    r.warnings.push_back(
        "tau_da exceeds 1/gamma_m: isochore duration is comparable to the "
        "persistent-current lifetime");
  if (!r.engine)
    throw NotAnEngineError("finite_cycle: work = " + std::to_string(r.work) +
                           " <= 0 at the limit cycle", r);
  return r;
}

/// Two-mode variant: same relaxation algebra on externally supplied
/// endpoint frequencies and equilibria.
inline CycleResult finite_cycle_from_endpoints(double omega_i, double omega_f,
                                               double n_i_eq, double n_f_eq,
                                               double tau_bc, double tau_da,
                                               double gamma_photon_side,
                                               double gamma_phonon_side) {
  if (tau_bc < 0.0 || tau_da < 0.0)
    throw ValidationError("finite_cycle: isochore durations must be >= 0");
  if (!(gamma_photon_side > 0.0) || !(gamma_phonon_side > 0.0))
    throw ValidationError("finite_cycle: relaxation rates must be > 0");
  const double u = std::exp(-gamma_photon_side * tau_bc);
  const double v = std::exp(-gamma_phonon_side * tau_da);
  const LimitCycleState s = detail::limit_cycle_endpoints(n_i_eq, n_f_eq, u, v);
  CycleResult r = detail::finite_cycle_from_endpoints(
      {omega_i, omega_f, n_i_eq, n_f_eq}, s);
  if (!r.engine)
    throw NotAnEngineError("finite_cycle: work = " + std::to_string(r.work) +
                           " <= 0 at the limit cycle", r);
  return r;
}

}  // namespace polotto::finitetime
