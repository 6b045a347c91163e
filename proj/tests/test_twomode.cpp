#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "polotto/finitetime.hpp"
#include "polotto/spectrum.hpp"
#include "polotto/twomode.hpp"

using namespace polotto;
using namespace polotto::twomode;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Low-OAM parameter set (l = 19): omega_c ~ 7.392, omega_d ~ 0.712, G = 0.2.
constexpr double kOmegaC = 7.3917173291743925;
constexpr double kOmegaD = 0.7119252124412911;
constexpr double kCoupling = 0.2;

TwoModeParams params_at(double neg_detuning) {
  return eliminate_c(neg_detuning, kOmegaC, kOmegaD, kCoupling);
}

}  // namespace

TEST_CASE("adiabatic elimination of the fast sidemode") {
  SECTION("effective detuning shift") {
    const auto p = eliminate_c(1.0, 7.392, 0.712, 0.2);
    CHECK_THAT(-p.neg_detuning_eff, WithinRel(-0.9945887445887446, 1e-12));
  }
  SECTION("zero coupling leaves the detuning untouched") {
    const auto p = eliminate_c(1.0, 7.392, 0.712, 0.0);
    CHECK(p.neg_detuning_eff == p.neg_detuning);
  }
  SECTION("infinitely fast eliminated mode") {
    const auto p = eliminate_c(1.0, 1e9, 0.712, 0.2);
    CHECK_THAT(p.neg_detuning_eff, WithinRel(1.0, 1e-10));
  }
  SECTION("validity guard") {
    CHECK_THROWS_AS(eliminate_c(5.0, 7.392, 0.712, 0.2), ValidityError);
    CHECK_THROWS_AS(eliminate_c(1.0, 7.392, 0.712, 3.0), ValidityError);
    CHECK_THROWS_AS(eliminate_c(-1.0, 7.392, 0.712, 0.2), ValidityError);
    try {
      eliminate_c(5.0, 7.392, 0.712, 0.2);
    } catch (const ValidityError& e) {
      // Error spells out the neglected correction scales.
      CHECK(std::string(e.what()).find("O(omega_d/omega_c)") != std::string::npos);
    }
  }
}

TEST_CASE("two-mode branch frequencies") {
  SECTION("decoupled limit") {
    const auto p = eliminate_c(0.3, kOmegaC, kOmegaD, 0.0);
    const auto [lo, hi] = two_mode_frequencies(p);
    CHECK_THAT(lo, WithinRel(0.3, 1e-12));
    CHECK_THAT(hi, WithinRel(kOmegaD, 1e-12));
  }
  SECTION("avoided-crossing gap at resonance is 2G") {
    // Choose -Dbar so that -Dbar_eff = omega_d.
    const double nd = kOmegaD + kCoupling * kCoupling / kOmegaC;
    const auto p = params_at(nd);
    CHECK_THAT(-p.neg_detuning_eff, WithinAbs(-kOmegaD, 1e-14));
    const auto [lo, hi] = two_mode_frequencies(p);
    CHECK_THAT(hi - lo, WithinRel(2.0 * kCoupling, 1e-12));
  }
  SECTION("2x2 Vieta identities") {
    for (double nd : {0.05, 0.3, 0.7, 1.2}) {
      const auto p = params_at(nd);
      const auto [lo, hi] = two_mode_frequencies(p);
      const double dbar_eff = -p.neg_detuning_eff;
      CHECK_THAT(lo + hi, WithinRel(p.omega_d - dbar_eff, 1e-12));
      CHECK_THAT(lo * hi, WithinRel(-p.omega_d * dbar_eff -
                                    p.coupling * p.coupling, 1e-12));
    }
  }
  SECTION("lower branch tracks the full three-mode branch A (regression)") {
    // In the validity window the two-mode reduction deviates from the exact
    // three-mode branch by O((omega_d/omega_c) * omega_d); the recorded
    // bound for this parameter set is 3e-4 gamma0.
    double max_dev = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double nd = 1e-3 + (1.4 - 1e-3) * i / 400.0;
      const auto p = params_at(nd);
      const double lower = two_mode_frequencies(p).first;
      const double exact = spectrum::branch_A_frequency(
          {nd, kOmegaC, kOmegaD, kCoupling});
      max_dev = std::max(max_dev, std::abs(lower - exact));
    }
    CHECK(max_dev < 3e-4);
    CHECK(max_dev > 1e-5);  // the reduction is approximate, not exact
  }
}

TEST_CASE("two-mode mixing weights") {
  SECTION("unit norm across detunings") {
    for (double nd : {0.05, 0.3, 0.7, 1.2}) {
      const auto p = params_at(nd);
      for (bool lower : {true, false}) {
        const auto w = two_mode_weights(p, lower);
        CHECK_THAT(w[0] * w[0] + w[1] * w[1], WithinRel(1.0, 1e-12));
        CHECK(w[0] > 0.0);
      }
    }
  }
  SECTION("branches are orthogonal") {
    const auto p = params_at(0.5);
    const auto lo = two_mode_weights(p, true);
    const auto hi = two_mode_weights(p, false);
    CHECK_THAT(lo[0] * hi[0] + lo[1] * hi[1], WithinAbs(0.0, 1e-12));
  }
  SECTION("decoupled weights collapse onto the bare modes") {
    const auto p = eliminate_c(0.3, kOmegaC, kOmegaD, 0.0);
    const auto lo = two_mode_weights(p, true);   // lower = photon at -Dbar < omega_d
    CHECK(lo[0] == 1.0);
    CHECK(lo[1] == 0.0);
    const auto hi = two_mode_weights(p, false);
    CHECK(hi[0] == 0.0);
    CHECK(hi[1] == 1.0);
  }
  SECTION("occupation follows the weighted average") {
    const auto p = params_at(0.5);
    const auto w = two_mode_weights(p, true);
    const double n = two_mode_occupation(p, true, 0.25, 4.0);
    CHECK_THAT(n, WithinRel(w[0] * w[0] * 0.25 + w[1] * w[1] * 4.0, 1e-13));
  }
}

TEST_CASE("two-mode Otto cycle") {
  thermo::BathSpec baths;
  baths.theta_phonon = 2.0837;  // 100 nK at gamma0 = 2 pi kHz
  baths.gamma_phonon = 0.1;

  SECTION("efficiency is the lower-branch frequency ratio") {
    const auto r = two_mode_otto(1.4, 0.3, kOmegaC, kOmegaD, kCoupling, baths);
    const double lo_i = two_mode_frequencies(params_at(1.4)).first;
    const double lo_f = two_mode_frequencies(params_at(0.3)).first;
    CHECK_THAT(r.eta, WithinRel(1.0 - lo_f / lo_i, 1e-12));
    CHECK(r.engine);
    CHECK_THAT(r.work, WithinRel(r.q_in + r.q_out, 1e-12));
  }

  SECTION("equal detunings yield zero efficiency and no engine") {
    try {
      two_mode_otto(0.5, 0.5, kOmegaC, kOmegaD, kCoupling, baths);
      FAIL("expected an error");
    } catch (const ValidationError&) {
      // strictly ordered detunings are required here
    }
  }

  SECTION("decoupled crossing limit") {
    // G -> 0 with -Dbar_i above and -Dbar_f below omega_d: the lower branch
    // is omega_d at i and -Dbar_f at f, so eta = 1 - |Dbar_f|/omega_d.
    const auto r = two_mode_otto(1.4, 0.3, kOmegaC, kOmegaD, 1e-4, baths);
    CHECK_THAT(r.eta, WithinAbs(1.0 - 0.3 / kOmegaD, 1e-6));
  }

  SECTION("efficiency decreases with the final detuning") {
    double prev = 1.0;
    for (double ndf : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}) {
      const auto r = two_mode_otto(1.4, ndf, kOmegaC, kOmegaD, kCoupling, baths);
      CHECK(r.eta < prev);
      prev = r.eta;
    }
  }

  SECTION("validity guard applies to both endpoints") {
    CHECK_THROWS_AS(two_mode_otto(5.0, 0.3, kOmegaC, kOmegaD, kCoupling, baths),
                    ValidityError);
  }

  SECTION("finite-time invariance carries over to the two-mode engine") {
    const auto ideal = two_mode_otto(1.4, 0.3, kOmegaC, kOmegaD, kCoupling, baths);
    for (double tbc : {0.2, 1.0})
      for (double tda : {0.5, 3.0}) {
        const auto finite = finitetime::finite_cycle_from_endpoints(
            ideal.omega_i, ideal.omega_f, ideal.n_i, ideal.n_f, tbc, tda,
            baths.gamma_photon, baths.gamma_phonon);
        CHECK_THAT(finite.eta, WithinRel(ideal.eta, 1e-12));
        CHECK(finite.work < ideal.work);
        CHECK(finite.work > 0.0);
      }
  }
}
