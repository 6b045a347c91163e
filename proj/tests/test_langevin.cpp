#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "polotto/langevin.hpp"

using namespace polotto;
using namespace polotto::langevin;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ModeNoise decaying_mode(double n0) {
  ModeNoise m;
  m.name = "c";
  m.omega = 0.712;
  m.gamma = 1.0;
  m.nbar = 0.0;
  m.initial_occupation = n0;
  m.init = InitKind::deterministic;
  return m;
}

}  // namespace

TEST_CASE("noiseless decay follows the damping envelope exactly") {
  NoiseSpec spec;
  spec.modes.push_back(decaying_mode(2.0));
  spec.seed = 99;
  SimOptions opt;
  opt.dt = 0.05;
  opt.horizon = 5.0;
  opt.n_traj = 4;
  opt.n_checkpoints = 11;

  const auto out = simulate_bare(spec, opt);
  const auto& s = out.occupation[0];
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    CHECK_THAT(s.mean[k], WithinRel(2.0 * std::exp(-1.0 * s.t[k]), 1e-12));
    CHECK(s.se[k] == 0.0);
  }
}

TEST_CASE("Euler-Maruyama decay approaches the envelope for small steps") {
  NoiseSpec spec;
  spec.modes.push_back(decaying_mode(2.0));
  SimOptions opt;
  opt.dt = 0.002;
  opt.horizon = 3.0;
  opt.n_traj = 2;
  opt.n_checkpoints = 4;
  opt.stepper = Stepper::euler_maruyama;

  const auto out = simulate_bare(spec, opt);
  const auto& s = out.occupation[0];
  for (std::size_t k = 0; k < s.t.size(); ++k)
    CHECK_THAT(s.mean[k], WithinRel(2.0 * std::exp(-s.t[k]), 2e-2));
}

TEST_CASE("steady state reproduces the bath occupation") {
  NoiseSpec spec;
  ModeNoise c;
  c.name = "c";
  c.omega = 0.712;
  c.gamma = 1.0;
  c.nbar = 2.455;
  c.initial_occupation = c.nbar;
  c.init = InitKind::thermal;
  spec.modes.push_back(c);
  spec.seed = 2024;

  SimOptions opt;
  opt.dt = 0.05;
  opt.horizon = 10.0;
  opt.n_traj = 10000;
  opt.n_checkpoints = 6;

  const auto out = simulate_bare(spec, opt);
  const auto& s = out.occupation[0];
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    CHECK(s.se[k] > 0.0);
    CHECK(std::abs(s.mean[k] - c.nbar) < 3.0 * s.se[k]);
  }
}

TEST_CASE("independent reservoirs leave modes uncorrelated") {
  NoiseSpec spec;
  ModeNoise c{"c", 7.39, 0.5, 1.8, 1.8, InitKind::thermal};
  ModeNoise d{"d", 0.712, 0.5, 2.455, 2.455, InitKind::thermal};
  spec.modes = {c, d};
  spec.seed = 7;

  SimOptions opt;
  opt.dt = 0.01;
  opt.horizon = 8.0;
  opt.n_traj = 10000;
  opt.n_checkpoints = 3;

  const auto out = simulate_bare(spec, opt);
  REQUIRE(out.cross_final.size() == 1);
  const auto& x = out.cross_final[0];
  CHECK(x.pair == "c*d");
  CHECK(std::abs(x.re_mean) < 3.0 * x.re_se);
  CHECK(std::abs(x.im_mean) < 3.0 * x.im_se);
}

TEST_CASE("polariton relaxation follows the exponential law") {
  PolaritonMode mode;
  mode.omega = 1.2;
  mode.gamma_eff = 0.8;
  mode.nbar_eff = 2.0;
  mode.initial_occupation = 6.0;
  mode.init = InitKind::deterministic;

  SimOptions opt;
  opt.dt = 0.05;
  opt.horizon = 8.0;
  opt.n_traj = 10000;
  opt.n_checkpoints = 10;

  const auto out = simulate_polariton(mode, opt, 31);
  const auto& s = out.occupation[0];
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    const double law = mode.nbar_eff + (mode.initial_occupation - mode.nbar_eff) *
                                           std::exp(-mode.gamma_eff * s.t[k]);
    if (k == 0) {
      CHECK_THAT(s.mean[k], WithinRel(6.0, 1e-14));
    } else {
      CHECK(std::abs(s.mean[k] - law) < 3.0 * s.se[k]);
    }
  }
}

TEST_CASE("zero-temperature polariton decays to vacuum") {
  PolaritonMode mode;
  mode.omega = 1.5;
  mode.gamma_eff = 1.0;
  mode.nbar_eff = 0.0;
  mode.initial_occupation = 3.0;
  mode.init = InitKind::deterministic;
  SimOptions opt;
  opt.dt = 0.05;
  opt.horizon = 12.0;
  opt.n_traj = 8;
  opt.n_checkpoints = 3;
  const auto out = simulate_polariton(mode, opt, 5);
  CHECK_THAT(out.occupation[0].mean.back(),
             WithinRel(3.0 * std::exp(-12.0), 1e-12));
}

TEST_CASE("effective damping closure interpolates the bare rates") {
  const spectrum::CouplingMatrix small{2.0, 173.27, 126.56, 4.0};
  const spectrum::CouplingMatrix large{2000.0, 173.27, 126.56, 4.0};
  thermo::BathSpec baths;
  baths.gamma_phonon = 0.1;
  // Photonlike branch A at small detuning: gamma_eff ~ gamma0.
  const auto sp_small = spectrum::polariton_spectrum(small);
  const double g_small = effective_damping(sp_small, spectrum::Branch::A, 1.0, 0.1);
  CHECK_THAT(g_small, WithinAbs(1.0, 5e-3));
  // Phononlike at large detuning: gamma_eff ~ gamma_m.
  const auto sp_large = spectrum::polariton_spectrum(large);
  const double g_large = effective_damping(sp_large, spectrum::Branch::A, 1.0, 0.1);
  CHECK_THAT(g_large, WithinAbs(0.1, 5e-3));
  // Always between the bare rates.
  for (double nd : {10.0, 126.0, 200.0, 500.0}) {
    const auto sp = spectrum::polariton_spectrum({nd, 173.27, 126.56, 4.0});
    const double g = effective_damping(sp, spectrum::Branch::A, 1.0, 0.1);
    CHECK(g >= 0.1 - 1e-12);
    CHECK(g <= 1.0 + 1e-12);
  }
}

TEST_CASE("polariton mode assembly from physical parameters") {
  const spectrum::CouplingMatrix m{1732.7, 173.27, 126.56, 4.0};
  thermo::BathSpec baths;
  baths.theta_phonon = 60.0;
  baths.gamma_phonon = 0.1;
  const auto mode = polariton_mode(m, baths);
  const auto sp = spectrum::polariton_spectrum(m);
  CHECK(mode.omega == sp.omega_A);
  CHECK_THAT(mode.nbar_eff,
             WithinRel(thermo::polariton_occupation(
                           sp, spectrum::Branch::A,
                           thermo::bath_occupations(m, baths)),
                       1e-14));
  CHECK(mode.gamma_eff > 0.1);
  CHECK(mode.gamma_eff < 1.0);
}

TEST_CASE("heat and work bookkeeping") {
  SECTION("steady state at fixed frequency: no work, no net heat") {
    SimOptions opt;
    opt.dt = 0.05;
    opt.horizon = 10.0;
    opt.n_traj = 10000;
    opt.n_checkpoints = 5;
    const auto r = simulate_schedule(Schedule::constant(1.5), 1.0, 2.0, 2.0,
                                     InitKind::thermal, opt, 11);
    for (std::size_t k = 1; k < r.t.size(); ++k) {
      CHECK(r.work_rate.mean[k] == 0.0);
      CHECK(std::abs(r.heat_rate.mean[k]) < 3.0 * r.heat_rate.se[k]);
    }
    CHECK(std::abs(r.total_heat_mean) < 3.0 * r.total_heat_se);
    CHECK(std::abs(r.first_law_residual_mean) < 1e-10);
  }

  SECTION("relaxing ensemble absorbs heat at the analytic rate") {
    const double gamma = 0.8, nbar = 3.0, n0 = 0.5, omega = 1.1;
    SimOptions opt;
    opt.dt = 0.02;
    opt.horizon = 4.0;
    opt.n_traj = 10000;
    opt.n_checkpoints = 9;
    const auto r = simulate_schedule(Schedule::constant(omega), gamma, nbar, n0,
                                     InitKind::deterministic, opt, 13);
    for (std::size_t k = 1; k < r.t.size(); ++k) {
      // Exact expected heat over the interval: hbar omega Delta n_analytic.
      auto n_of = [&](double t) {
        return nbar + (n0 - nbar) * std::exp(-gamma * t);
      };
      const double span = r.t[k] - r.t[k - 1];
      const double expected = omega * (n_of(r.t[k]) - n_of(r.t[k - 1])) / span;
      CHECK(std::abs(r.heat_rate.mean[k] - expected) < 3.0 * r.heat_rate.se[k]);
      CHECK(r.heat_rate.mean[k] > 0.0);  // heating toward the bath
    }
  }

  SECTION("slow ramp with frozen occupation extracts the quasi-static work") {
    // Weak damping freezes the occupation at its initial thermal value, so
    // W ~ -nbar * Delta(omega).
    const double nbar = 2.0;
    SimOptions opt;
    opt.dt = 0.02;
    opt.horizon = 10.0;
    opt.n_traj = 10000;
    opt.n_checkpoints = 5;
    const auto r = simulate_schedule(Schedule::linear_ramp(4.0, 2.0, 10.0), 0.01,
                                     nbar, nbar, InitKind::thermal, opt, 17);
    CHECK(r.total_work_se > 0.0);
    CHECK(std::abs(r.total_work_mean - nbar * 2.0) < 3.0 * r.total_work_se);
    CHECK(std::abs(r.first_law_residual_mean) < 1e-10);
    CHECK(r.first_law_residual_se < 1e-10);
  }

  SECTION("first law closes pathwise for an aggressive schedule") {
    SimOptions opt;
    opt.dt = 0.01;
    opt.horizon = 3.0;
    opt.n_traj = 200;
    opt.n_checkpoints = 7;
    opt.stepper = Stepper::euler_maruyama;
    const auto r = simulate_schedule(Schedule::linear_ramp(8.0, 1.0, 3.0), 2.0,
                                     1.5, 4.0, InitKind::deterministic, opt, 23);
    CHECK(std::abs(r.first_law_residual_mean) < 1e-10);
  }
}

TEST_CASE("piecewise-linear schedules from samples") {
  const auto s = Schedule::from_samples({{0.0, 1.0}, {1.0, 3.0}, {2.0, 3.0}});
  CHECK(s.omega(0.0) == 1.0);
  CHECK_THAT(s.omega(0.5), WithinRel(2.0, 1e-14));
  CHECK(s.omega(1.7) == 3.0);
  CHECK(s.omega(5.0) == 3.0);  // clamped beyond the last sample
  CHECK_THROWS_AS(Schedule::from_samples({{0.0, 1.0}}), ValidationError);
}

TEST_CASE("spectral line of the stationary mode is a Lorentzian") {
  const double omega = 4.0, gamma = 1.0, nbar = 2.0, dt = 0.02;
  const auto p = steady_periodogram(omega, gamma, nbar, dt, 16384, 256, 99, 9);
  // Peak at the mode frequency within a few resolution bins.
  const double resolution = 2.0 * constants::pi / (dt * 16384);
  CHECK(std::abs(p.peak_omega - omega) < 20.0 * resolution);
  // Half-width at half-maximum = gamma/2 within 10%.
  CHECK_THAT(p.half_width, WithinRel(0.5 * gamma, 0.10));
}

TEST_CASE("identical seeds reproduce identical ensembles") {
  NoiseSpec spec;
  spec.modes.push_back({"d", 0.7, 0.9, 1.3, 1.3, InitKind::thermal});
  spec.seed = 424242;
  SimOptions opt;
  opt.dt = 0.03;
  opt.horizon = 2.0;
  opt.n_traj = 50;
  opt.n_checkpoints = 5;

  const auto a = simulate_bare(spec, opt);
  const auto b = simulate_bare(spec, opt);
  for (std::size_t k = 0; k < a.occupation[0].mean.size(); ++k) {
    CHECK(a.occupation[0].mean[k] == b.occupation[0].mean[k]);
    CHECK(a.occupation[0].se[k] == b.occupation[0].se[k]);
  }
  spec.seed = 424243;
  const auto c = simulate_bare(spec, opt);
  CHECK(c.occupation[0].mean.back() != a.occupation[0].mean.back());
}

TEST_CASE("stability guard") {
  NoiseSpec spec;
  spec.modes.push_back({"a", 50.0, 1.0, 1.0, 1.0, InitKind::thermal});
  SimOptions opt;
  opt.dt = 0.01;  // dt * omega = 0.5 >= 0.1
  opt.horizon = 1.0;
  opt.n_traj = 2;
  CHECK_THROWS_AS(simulate_bare(spec, opt), StabilityError);
}

TEST_CASE("input validation") {
  NoiseSpec empty;
  SimOptions opt;
  CHECK_THROWS_AS(simulate_bare(empty, opt), ValidationError);

  NoiseSpec bad;
  bad.modes.push_back({"a", 1.0, -1.0, 1.0, 0.0, InitKind::thermal});
  CHECK_THROWS_AS(simulate_bare(bad, opt), ValidationError);

  CHECK_THROWS_AS(steady_periodogram(1.0, 1.0, 1.0, 0.01, 1000, 4, 1),
                  ValidationError);  // not a power of two
}
