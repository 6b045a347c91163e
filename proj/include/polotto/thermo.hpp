#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "polotto/core.hpp"
#include "polotto/errors.hpp"
#include "polotto/spectrum.hpp"

// Thermal occupations and the ideal Otto cycle driven along one polariton
// branch.  Temperatures are carried as the dimensionless ratio
// theta = k_B T / (hbar gamma0); energies come out in hbar*gamma0 units.

namespace polotto::thermo {

using spectrum::Branch;
using spectrum::CouplingMatrix;
using spectrum::PolaritonSpectrum;

/// Bose factor n = 1/(exp(omega/theta) - 1) with omega in gamma0 units and
/// theta = k_B T/(hbar gamma0).  Zero-temperature limit returns 0.
inline double bose_occupation(double omega, double theta) {
  if (theta < 0.0) throw ValidationError("bose_occupation: theta must be >= 0");
  if (theta == 0.0) return 0.0;
  if (omega <= 0.0)
    throw DivergentOccupationError(
        "bose_occupation: omega = " + std::to_string(omega) +
        " <= 0 at nonzero temperature");
  return 1.0 / std::expm1(omega / theta);
}

/// Kelvin-input convenience; conversion happens through core::Units once.
inline double bose_occupation_kelvin(const core::Units& units, double omega,
                                     double kelvin) {
  return bose_occupation(omega, units.temperature_ratio(kelvin));
}

/// Photon and phonon reservoir temperatures (dimensionless) plus damping
/// rates in gamma0 units.
struct BathSpec {
  double theta_photon = 0.0;
  double theta_phonon = 0.0;
  double gamma_photon = 1.0;  // photon damping == gamma0 by definition
  double gamma_phonon = 0.1;  // gamma_m

  static BathSpec from_kelvin(const core::Units& units, double t_photon_kelvin,
                              double t_phonon_kelvin, double gamma_phonon) {
    return {units.temperature_ratio(t_photon_kelvin),
            units.temperature_ratio(t_phonon_kelvin), 1.0, gamma_phonon};
  }

  void validate() const {
    if (theta_photon < 0.0 || theta_phonon < 0.0)
      throw ValidationError("BathSpec: temperatures must be >= 0");
    if (!(gamma_photon > 0.0) || !(gamma_phonon > 0.0))
      throw ValidationError("BathSpec: damping rates must be > 0");
  }
};

/// Equilibrium occupations of the bare modes.
struct BareOccupations {
  double n_a = 0.0;
  double n_c = 0.0;
  double n_d = 0.0;
};

/// Bare occupations against the physical reservoirs.  The photon occupation
/// defaults to zero (optical frequencies); pass n_a_override to exercise the
/// full weighted form.
inline BareOccupations bath_occupations(
    const CouplingMatrix& m, const BathSpec& baths,
    std::optional<double> n_a_override = std::nullopt) {
  baths.validate();
  BareOccupations n;
  n.n_a = n_a_override.value_or(0.0);
  n.n_c = bose_occupation(m.omega_c, baths.theta_phonon);
  n.n_d = bose_occupation(m.omega_d, baths.theta_phonon);
  return n;
}

/// Hopfield-weighted thermal occupation of one branch,
/// <j'j> = |X_a|^2 n_a + |X_c|^2 n_c + |X_d|^2 n_d.
inline double polariton_occupation(const PolaritonSpectrum& spec, Branch branch,
                                   const BareOccupations& n) {
  const auto w = spec.weights(branch);
  return w[0] * w[0] * n.n_a + w[1] * w[1] * n.n_c + w[2] * w[2] * n.n_d;
}

/// One ideal Otto cycle: two detuning isentropes bridged by full
/// thermalization isochores.  Endpoint i sits at the larger |Dbar| and
/// thermalizes against the phonon reservoir; endpoint f sits at the smaller
/// |Dbar| and thermalizes against the (vacuum) photon reservoir.
struct OttoCycleSpec {
  double neg_detuning_i;
  double neg_detuning_f;
  double omega_c;
  double omega_d;
  double coupling;
  BathSpec baths;
  Branch branch = Branch::A;
  std::optional<double> n_a_override;  // photon-bath occupation at endpoint i

  CouplingMatrix lambda_at(double neg_detuning) const {
    return {neg_detuning, omega_c, omega_d, coupling};
  }

  void validate() const {
    baths.validate();
    lambda_at(neg_detuning_i).validate();
    // Equality is admitted so the degenerate zero-work sweep stays
    // inspectable; it fails the engine check downstream.
    if (!(neg_detuning_i >= neg_detuning_f) || !(neg_detuning_f > 0.0))
      throw ValidationError(
          "OttoCycleSpec: need -Dbar_i >= -Dbar_f > 0 (got " +
          std::to_string(neg_detuning_i) + ", " +
          std::to_string(neg_detuning_f) + ")");
  }

  /// Engine-regime advisories (not errors): the analytic picture assumes
  /// -Dbar_i >> omega_{c,d} and -Dbar_f << omega_{c,d}.
  std::vector<std::string> regime_warnings() const {
    std::vector<std::string> w;
    if (!(neg_detuning_i > 2.0 * omega_c))
      w.push_back("-Dbar_i is not large against omega_c; endpoint i is not "
                  "deeply phononlike");
    if (!(neg_detuning_f < 0.5 * omega_d))
      w.push_back("-Dbar_f is not small against omega_d; endpoint f is not "
                  "deeply photonlike");
    return w;
  }
};

struct CycleResult {
  double work;      // hbar*gamma0 units, > 0 for an engine
  double q_in;      // heat absorbed from the phonon reservoir
  double q_out;     // heat rejected to the photon reservoir (<= 0)
  double eta;       // 1 - Omega_f/Omega_i
  double omega_i;
  double omega_f;
  double n_i;       // branch occupation at endpoint i
  double n_f;       // branch occupation at endpoint f
  bool engine;      // work > 0
  std::vector<std::string> warnings;
};

class NotAnEngineError : public PhysicsError {
 public:
  NotAnEngineError(const std::string& what, CycleResult result)
      : PhysicsError(what), result_(std::move(result)) {}
  const CycleResult& result() const noexcept { return result_; }

 private:
  CycleResult result_;
};

/// Cycle formulas evaluated without the engine check; used for the branch-B
/// diagnostic and by callers that want raw values.
inline CycleResult evaluate_cycle(const OttoCycleSpec& spec) {
  spec.validate();
  const auto spec_i = spectrum::polariton_spectrum(spec.lambda_at(spec.neg_detuning_i));
  const auto spec_f = spectrum::polariton_spectrum(spec.lambda_at(spec.neg_detuning_f));

  CycleResult r;
  r.omega_i = spec_i.branch_frequency(spec.branch);
  r.omega_f = spec_f.branch_frequency(spec.branch);

  // Endpoint i: phonon reservoir sets the bare occupations; endpoint f:
  // photon reservoir at T ~ 0, all bare occupations zero.
  const BareOccupations n_i_bare =
      bath_occupations(spec.lambda_at(spec.neg_detuning_i), spec.baths,
                       spec.n_a_override);
  r.n_i = polariton_occupation(spec_i, spec.branch, n_i_bare);
  r.n_f = polariton_occupation(spec_f, spec.branch, BareOccupations{});

  const double dn = r.n_i - r.n_f;
  r.work = (r.omega_i - r.omega_f) * dn;
  r.q_in = r.omega_i * dn;
  r.q_out = -r.omega_f * dn;
  r.eta = 1.0 - r.omega_f / r.omega_i;
  r.engine = r.work > 0.0;
  r.warnings = spec.regime_warnings();
  return r;
}

/// Ideal Otto cycle on the configured branch.  Throws NotAnEngineError
/// (carrying the raw values) when no positive work is extracted.
inline CycleResult ideal_otto(const OttoCycleSpec& spec) {
  CycleResult r = evaluate_cycle(spec);
  if (!r.engine)
    throw NotAnEngineError(
        "ideal_otto: work = " + std::to_string(r.work) +
        " <= 0; cycle does not operate as an engine", r);
  return r;
}

/// Same cycle formulas on the complementary branch B (no engine check);
/// diagnostic only, the driven branch stays A.
inline CycleResult branch_b_diagnostic(OttoCycleSpec spec) {
  spec.branch = Branch::B;
  return evaluate_cycle(spec);
}

/// Closed-form second-order estimate
///   eta ~ 1 + Dbar_f/omega_d + (G^2/omega_d)(1/omega_d + 1/omega_c),
/// valid deep in the engine regime.
struct EfficiencyGuard {
  double large_min_ratio = 5.0;   // -Dbar_i > 5 omega_c
  double small_max_ratio = 0.1;   // -Dbar_f < omega_d/10
};

inline double asymptotic_efficiency(const OttoCycleSpec& spec,
                                    const EfficiencyGuard& guard = {}) {
  spec.validate();
  if (!(spec.neg_detuning_i > guard.large_min_ratio * spec.omega_c))
    throw RegimeError("asymptotic_efficiency: -Dbar_i = " +
                      std::to_string(spec.neg_detuning_i) +
                      " violates the deep large-detuning guard");
  if (!(spec.neg_detuning_f < guard.small_max_ratio * spec.omega_d))
    throw RegimeError("asymptotic_efficiency: -Dbar_f = " +
                      std::to_string(spec.neg_detuning_f) +
                      " violates the deep small-detuning guard");
  const double g2 = spec.coupling * spec.coupling;
  return 1.0 - spec.neg_detuning_f / spec.omega_d +
         g2 / spec.omega_d * (1.0 / spec.omega_d + 1.0 / spec.omega_c);
}

}  // namespace polotto::thermo
