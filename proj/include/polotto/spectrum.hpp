#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "polotto/constants.hpp"
#include "polotto/errors.hpp"

// Polaritonic normal modes of the linearized photon/sidemode Hamiltonian.
// The coupled-mode problem is the real symmetric 3x3 matrix
//
//          ( -Dbar   G      G   )
//   Lambda = (  G    omega_c  0  )
//          (  G      0   omega_d )
//
// whose eigenvalues are the branch frequencies.  Everything is in gamma0
// units.  Branches are labeled by sorted order: A (lowest), C (middle),
// B (highest), which matches the perturbative limits in both detuning
// regimes.

namespace polotto::spectrum {

enum class Branch { A, C, B };

inline const char* branch_name(Branch b) {
  switch (b) {
    case Branch::A: return "A";
    case Branch::C: return "C";
    default: return "B";
  }
}

struct CouplingMatrix {
  double neg_detuning;  // -Dbar > 0 for red detuning
  double omega_c;
  double omega_d;
  double coupling;      // G-tilde >= 0

  void validate() const {
    if (!(coupling >= 0.0))
      throw ValidationError("CouplingMatrix: coupling must be >= 0");
    if (!std::isfinite(neg_detuning) || !std::isfinite(omega_c) ||
        !std::isfinite(omega_d) || !std::isfinite(coupling))
      throw ValidationError("CouplingMatrix: entries must be finite");
  }

  std::array<std::array<double, 3>, 3> matrix() const {
    return {{{neg_detuning, coupling, coupling},
             {coupling, omega_c, 0.0},
             {coupling, 0.0, omega_d}}};
  }
};

struct CharacteristicCoefficients {
  double c1, c2, c3;  // lambda^3 + c1 lambda^2 + c2 lambda + c3 = 0
};

/// Coefficients of the characteristic cubic of Lambda:
///   c1 = Dbar - omega_c - omega_d
///   c2 = omega_c omega_d - Dbar (omega_c + omega_d) - 2 G^2
///   c3 = G^2 (omega_c + omega_d) + Dbar omega_c omega_d
inline CharacteristicCoefficients characteristic_coefficients(
    const CouplingMatrix& m) {
  m.validate();
  const double dbar = -m.neg_detuning;
  const double g2 = m.coupling * m.coupling;
  return {dbar - m.omega_c - m.omega_d,
          m.omega_c * m.omega_d - dbar * (m.omega_c + m.omega_d) - 2.0 * g2,
          g2 * (m.omega_c + m.omega_d) + dbar * m.omega_c * m.omega_d};
}

/// Three real roots of lambda^3 + c1 lambda^2 + c2 lambda + c3, sorted
/// ascending, via the trigonometric form of Cardano's formula.  Throws
/// ComplexRootError when the cubic does not have three real roots beyond
/// the clamping tolerance (never the case for a symmetric matrix).
inline std::array<double, 3> cardano_roots(double c1, double c2, double c3) {
  const double p = c2 - c1 * c1 / 3.0;
  const double q = 2.0 * c1 * c1 * c1 / 27.0 - c1 * c2 / 3.0 + c3;

  // p -> 0 only when all three roots coincide.
  const double scale = std::max({1.0, std::abs(c1), std::sqrt(std::abs(c2)),
                                 std::cbrt(std::abs(c3))});
  if (std::abs(p) < 1e-30 * scale * scale) {
    const double r = -c1 / 3.0;
    return {r, r, r};
  }
  if (p > 0.0)
    throw ComplexRootError("cardano_roots: depressed cubic has p > 0 "
                           "(complex root pair)");

  const double rho = 2.0 * std::sqrt(-p / 3.0);
  double arg = 3.0 * q / (2.0 * p) * std::sqrt(-3.0 / p);
  if (std::abs(arg) > 1.0 + 1e-9)
    throw ComplexRootError(
        "cardano_roots: acos argument " + std::to_string(arg) +
        " exceeds 1 beyond tolerance (non-symmetric input or cancellation)");
  arg = std::clamp(arg, -1.0, 1.0);
  const double theta = std::acos(arg);

  std::array<double, 3> roots;
  for (int k = 0; k < 3; ++k)
    roots[k] = -c1 / 3.0 +
               rho * std::cos((theta - 2.0 * constants::pi * k) / 3.0);

  // Newton polish: the trigonometric form carries absolute error on the
  // scale of the largest root, which is too coarse for well-separated small
  // roots.  Skipped near multiple roots where the derivative degenerates.
  for (double& x : roots) {
    for (int it = 0; it < 2; ++it) {
      const double f = ((x + c1) * x + c2) * x + c3;
      const double fp = (3.0 * x + 2.0 * c1) * x + c2;
      if (fp == 0.0) break;
      const double step = f / fp;
      if (!std::isfinite(step) || std::abs(step) > 1e-3 * (1.0 + std::abs(x)))
        break;
      x -= step;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

namespace detail {

/// Cyclic Jacobi rotations for a symmetric 3x3 matrix.  Fallback path for
/// near-degenerate cubics where the closed form loses precision.
inline std::array<double, 3> jacobi_eigenvalues(
    std::array<std::array<double, 3>, 3> a) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
    double diag = std::abs(a[0][0]) + std::abs(a[1][1]) + std::abs(a[2][2]);
    if (off <= 1e-16 * std::max(1.0, diag)) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        std::array<std::array<double, 3>, 3> r{};
        for (int i = 0; i < 3; ++i) r[i][i] = 1.0;
        r[p][p] = c; r[q][q] = c; r[p][q] = s; r[q][p] = -s;
        // a <- r^T a r
        std::array<std::array<double, 3>, 3> tmp{};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) tmp[i][j] += r[k][i] * a[k][j];
        std::array<std::array<double, 3>, 3> next{};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) next[i][j] += tmp[i][k] * r[k][j];
        a = next;
      }
    }
  }
  std::array<double, 3> ev{a[0][0], a[1][1], a[2][2]};
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace detail

/// Branch frequencies of Lambda, sorted ascending.  Cardano closed form with
/// a Jacobi fallback for pathological inputs.
inline std::array<double, 3> branch_frequencies(const CouplingMatrix& m) {
  const auto [c1, c2, c3] = characteristic_coefficients(m);
  try {
    return cardano_roots(c1, c2, c3);
  } catch (const ComplexRootError&) {
    return detail::jacobi_eigenvalues(m.matrix());
  }
}

namespace detail {

/// Refines x = omega_j - omega_ref to full relative precision by Newton on
/// the characteristic cubic shifted to the reference frequency,
/// q(x) = p(x + omega_ref).  The shifted coefficients are formed in closed
/// form (q(0) = -G^2 (omega_other - omega_ref) etc.), so no cancellation of
/// nearly-equal large numbers enters; this is what keeps Hopfield weights
/// accurate across avoided crossings where omega_j - omega_ref is tiny.
inline double refine_root_offset(double x, const CouplingMatrix& m,
                                 double omega_ref, double omega_other) {
  const double dbar = -m.neg_detuning;
  const double g2 = m.coupling * m.coupling;
  // p(lambda) = (lambda + Dbar)(lambda - omega_c)(lambda - omega_d)
  //             - G^2 (2 lambda - omega_c - omega_d), shifted by omega_ref.
  const double b0 = g2 * (omega_other - omega_ref);
  const double b1 = (omega_ref + dbar) * (omega_ref - omega_other) - 2.0 * g2;
  const double b2 = 2.0 * omega_ref + dbar - omega_other;
  for (int it = 0; it < 3; ++it) {
    const double f = ((x + b2) * x + b1) * x + b0;
    const double fp = (3.0 * x + 2.0 * b2) * x + b1;
    if (fp == 0.0) break;
    const double step = f / fp;
    if (!std::isfinite(step) || std::abs(step) > 0.5 * std::abs(x)) break;
    x -= step;
  }
  return x;
}

}  // namespace detail

/// Normalized eigenvector weights (X_a, X_c, X_d) of the branch at frequency
/// omega_j, gauge-fixed by X_a > 0.  Throws SingularWeightError when omega_j
/// collides with a bare sidemode frequency (possible for degenerate spectra).
inline std::array<double, 3> hopfield_weights(double omega_j,
                                              const CouplingMatrix& m) {
  m.validate();
  if (m.coupling > 0.0) {
    const double tol = 1e-12;
    if (std::abs(omega_j - m.omega_c) < tol ||
        std::abs(omega_j - m.omega_d) < tol)
      throw SingularWeightError(
          "hopfield_weights: branch frequency coincides with a bare sidemode");
  }
  const double dc =
      detail::refine_root_offset(omega_j - m.omega_c, m, m.omega_c, m.omega_d);
  const double dd =
      detail::refine_root_offset(omega_j - m.omega_d, m, m.omega_d, m.omega_c);
  const double xc = m.coupling / dc;
  const double xd = m.coupling / dd;
  const double norm = std::sqrt(1.0 + xc * xc + xd * xd);
  return {1.0 / norm, xc / norm, xd / norm};
}

/// Branch frequencies plus the full Hopfield mixing matrix.
/// hopfield[k][j]: k indexes the bare modes (a, c, d), j the branches in
/// sorted order (A, C, B).  Columns are unit-norm and mutually orthogonal.
struct PolaritonSpectrum {
  double omega_A, omega_C, omega_B;
  std::array<std::array<double, 3>, 3> hopfield;
  std::array<double, 3> normalizer;  // N_A, N_C, N_B

  double branch_frequency(Branch b) const {
    switch (b) {
      case Branch::A: return omega_A;
      case Branch::C: return omega_C;
      default: return omega_B;
    }
  }
  /// (X_a, X_c, X_d) for one branch.
  std::array<double, 3> weights(Branch b) const {
    const int j = static_cast<int>(b);
    return {hopfield[0][j], hopfield[1][j], hopfield[2][j]};
  }
};

inline PolaritonSpectrum polariton_spectrum(const CouplingMatrix& m) {
  m.validate();
  const auto roots = branch_frequencies(m);

  const double degeneracy_tol = 1e-10;
  if (m.coupling > 0.0 &&
      (roots[1] - roots[0] < degeneracy_tol || roots[2] - roots[1] < degeneracy_tol))
    throw DegenerateSpectrumError(
        "polariton_spectrum: two branches coincide within 1e-10 gamma0; "
        "Hopfield construction is singular");

  PolaritonSpectrum out;
  out.omega_A = roots[0];
  out.omega_C = roots[1];
  out.omega_B = roots[2];

  if (m.coupling == 0.0) {
    // Decoupled limit: each branch is a bare mode.  Pair sorted roots with
    // sorted bare frequencies so the assignment is stable under degeneracy.
    std::array<std::pair<double, int>, 3> bare{
        {{m.neg_detuning, 0}, {m.omega_c, 1}, {m.omega_d, 2}}};
    std::sort(bare.begin(), bare.end());
    out.hopfield = {};
    for (int j = 0; j < 3; ++j) out.hopfield[bare[j].second][j] = 1.0;
    out.normalizer = {1.0, 1.0, 1.0};
    return out;
  }

  for (int j = 0; j < 3; ++j) {
    const auto w = hopfield_weights(roots[j], m);
    out.hopfield[0][j] = w[0];
    out.hopfield[1][j] = w[1];
    out.hopfield[2][j] = w[2];
    out.normalizer[j] = 1.0 / w[0];
  }
  return out;
}

/// Lowest (A) branch frequency; convenience for protocol inversion.
inline double branch_A_frequency(const CouplingMatrix& m) {
  return branch_frequencies(m)[0];
}

// ---------------------------------------------------------------------------
// Perturbative asymptotics in the coupling, second order for frequencies,
// first order for mixing.  Valid deep in the small- or large-detuning regime.

enum class DetuningRegime { small_detuning, large_detuning };

struct RegimeGuard {
  double small_max_ratio = 0.5;  // require -Dbar < ratio * omega_d
  double large_min_ratio = 2.0;  // require -Dbar > ratio * omega_c
};

inline void check_regime(DetuningRegime regime, const CouplingMatrix& m,
                         const RegimeGuard& guard) {
  if (regime == DetuningRegime::small_detuning) {
    if (!(m.neg_detuning < guard.small_max_ratio * m.omega_d))
      throw RegimeError("asymptotics: -Dbar = " + std::to_string(m.neg_detuning) +
                        " is not small against omega_d = " +
                        std::to_string(m.omega_d));
  } else {
    if (!(m.neg_detuning > guard.large_min_ratio * m.omega_c))
      throw RegimeError("asymptotics: -Dbar = " + std::to_string(m.neg_detuning) +
                        " is not large against omega_c = " +
                        std::to_string(m.omega_c));
  }
}

struct AsymptoticFrequencies {
  double omega_A, omega_C, omega_B;
};

inline AsymptoticFrequencies asymptotic_frequencies(
    DetuningRegime regime, const CouplingMatrix& m,
    const RegimeGuard& guard = {}) {
  m.validate();
  check_regime(regime, m, guard);
  const double dbar = -m.neg_detuning;
  const double g2 = m.coupling * m.coupling;
  const double shift_c = g2 / (dbar + m.omega_c);
  const double shift_d = g2 / (dbar + m.omega_d);
  AsymptoticFrequencies out;
  if (regime == DetuningRegime::small_detuning) {
    out.omega_A = -dbar - shift_c - shift_d;  // photonlike
    out.omega_B = m.omega_c + shift_c;
    out.omega_C = m.omega_d + shift_d;
  } else {
    out.omega_A = m.omega_d + shift_d;        // phononlike (d-like)
    out.omega_B = -dbar - shift_c - shift_d;
    out.omega_C = m.omega_c + shift_c;
  }
  return out;
}

/// First-order mixing weights, unnormalized, in the same eigenvector gauge as
/// hopfield_weights (coefficient of bare mode k in branch j is
/// G / (omega_j - omega_k) at leading order).  Rows index (a, c, d), columns
/// the branches (A, C, B).  Decoupled limit reduces to a permutation.
inline std::array<std::array<double, 3>, 3> asymptotic_mixing(
    DetuningRegime regime, const CouplingMatrix& m,
    const RegimeGuard& guard = {}) {
  m.validate();
  check_regime(regime, m, guard);
  const double dbar = -m.neg_detuning;
  const double mix_c = m.coupling / (-dbar - m.omega_c);  // a-branch c content
  const double mix_d = m.coupling / (-dbar - m.omega_d);  // a-branch d content

  std::array<std::array<double, 3>, 3> w{};
  // Columns of the photonlike, c-like and d-like combinations.
  const std::array<double, 3> photon{1.0, mix_c, mix_d};
  const std::array<double, 3> clike{-mix_c, 1.0, 0.0};
  const std::array<double, 3> dlike{-mix_d, 0.0, 1.0};
  const bool small = (regime == DetuningRegime::small_detuning);
  // Sorted branch order: small detuning (A,C,B) = (photon, d, c);
  // large detuning (A,C,B) = (d, c, photon).
  const auto colA = small ? photon : dlike;
  const auto colC = small ? dlike : clike;
  const auto colB = small ? clike : photon;
  for (int k = 0; k < 3; ++k) {
    w[k][0] = colA[k];
    w[k][1] = colC[k];
    w[k][2] = colB[k];
  }
  return w;
}

}  // namespace polotto::spectrum
