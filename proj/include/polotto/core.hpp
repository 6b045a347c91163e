#pragma once

#include <cmath>
#include <string>

#include "polotto/constants.hpp"
#include "polotto/errors.hpp"

// Units and bare-mode quantities of the ring-BEC/cavity setup. This is the
// only place where SI values enter; everything downstream works in units of
// the photon decay rate gamma0 (frequencies/rates) and hbar*gamma0 (energies).

namespace polotto::core {

/// Experimental inputs. Frequencies and rates are angular (rad/s).
struct PhysicalConfig {
  double atom_mass_amu = 23.0;        // m, atomic mass units
  double ring_radius_m = 10e-6;       // R
  int winding_number = 20;            // L_p
  int oam = 130;                      // l, OAM of the drive (l >= 1)
  double trap_frequency_rad_s = 2.0 * constants::pi * 840.0;  // omega_rho
  double atom_number = 1e4;           // N
  double scattering_length_m = 0.1e-9;                         // a
  double photon_decay_rad_s = 2.0 * constants::pi * 1e3;       // gamma0
  double phonon_decay_rad_s = 2.0 * constants::pi * 1e3 * 0.1; // gamma_m
  double coupling_rad_s = 2.0 * constants::pi * 1e3 * 4.0;     // G-tilde
  double t_photon_kelvin = 0.0;
  double t_phonon_kelvin = 100e-9;
  bool use_dressed = false;  // feed Bogoliubov-dressed sidemode frequencies downstream

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw ValidationError(std::string("PhysicalConfig: ") + name +
                              " must be strictly positive and finite");
    };
    positive(atom_mass_amu, "atom_mass");
    positive(ring_radius_m, "ring_radius");
    positive(trap_frequency_rad_s, "trap_frequency");
    positive(scattering_length_m, "scattering_length");
    positive(photon_decay_rad_s, "photon_decay");
    positive(phonon_decay_rad_s, "phonon_decay");
    positive(coupling_rad_s, "coupling");
    if (oam < 1) throw ValidationError("PhysicalConfig: oam must be >= 1");
    if (atom_number < 0.0 || !std::isfinite(atom_number))
      throw ValidationError("PhysicalConfig: atom_number must be >= 0");
    if (t_photon_kelvin < 0.0 || t_phonon_kelvin < 0.0)
      throw ValidationError("PhysicalConfig: temperatures must be >= 0");
  }
};

/// Conversions between SI values and gamma0 units.
struct Units {
  double gamma0_rad_s;

  double to_gamma0(double omega_rad_s) const { return omega_rad_s / gamma0_rad_s; }
  double to_rad_s(double omega_gamma0) const { return omega_gamma0 * gamma0_rad_s; }
  /// Dimensionless temperature k_B T / (hbar gamma0).
  double temperature_ratio(double kelvin) const {
    return constants::k_boltzmann * kelvin / (constants::hbar * gamma0_rad_s);
  }
  double kelvin_from_ratio(double theta) const {
    return theta * constants::hbar * gamma0_rad_s / constants::k_boltzmann;
  }
};

inline Units units_of(const PhysicalConfig& cfg) {
  return Units{cfg.photon_decay_rad_s};
}

/// Bare-mode quantities derived from a PhysicalConfig, in gamma0 units.
struct DerivedFrequencies {
  double omega_c;          // sidemode L_p + 2l
  double omega_d;          // sidemode L_p - 2l
  double omega_rot;        // rotational frequency Omega_p of the persistent current
  double interaction_4gN;  // 4*gtilde*N
  double omega_c_dressed;
  double omega_d_dressed;
};

/// omega' = sqrt(omega (omega + 4 gtilde N)); reduces to omega for a
/// non-interacting gas.
inline double bogoliubov_dress(double omega, double interaction_4gN) {
  if (omega < 0.0 || interaction_4gN < 0.0)
    throw DomainError("bogoliubov_dress: arguments must be non-negative");
  return std::sqrt(omega * (omega + interaction_4gN));
}

/// 4*gtilde*N = 2 omega_rho a N / (pi R), in gamma0 units.
inline double interaction_scale(const PhysicalConfig& cfg) {
  cfg.validate();
  const double scale_rad_s = 2.0 * cfg.trap_frequency_rad_s *
                             cfg.scattering_length_m * cfg.atom_number /
                             (constants::pi * cfg.ring_radius_m);
  return units_of(cfg).to_gamma0(scale_rad_s);
}

/// Sidemode frequencies omega_{c,d} = hbar (L_p +- 2l)^2 / (2 m R^2) and the
/// rotational frequency Omega_p = hbar L_p^2 / (2 m R^2), all in gamma0 units.
inline DerivedFrequencies sidemode_frequencies(const PhysicalConfig& cfg) {
  cfg.validate();
  const double mass_kg = cfg.atom_mass_amu * constants::atomic_mass_unit;
  const double inertia = 2.0 * mass_kg * cfg.ring_radius_m * cfg.ring_radius_m;
  const double plus = static_cast<double>(cfg.winding_number) + 2.0 * cfg.oam;
  const double minus = static_cast<double>(cfg.winding_number) - 2.0 * cfg.oam;
  const Units u = units_of(cfg);

  DerivedFrequencies out;
  out.omega_c = u.to_gamma0(constants::hbar * plus * plus / inertia);
  out.omega_d = u.to_gamma0(constants::hbar * minus * minus / inertia);
  out.omega_rot = u.to_gamma0(constants::hbar * cfg.winding_number *
                              cfg.winding_number / inertia);
  out.interaction_4gN = interaction_scale(cfg);
  out.omega_c_dressed = bogoliubov_dress(out.omega_c, out.interaction_4gN);
  out.omega_d_dressed = bogoliubov_dress(out.omega_d, out.interaction_4gN);
  return out;
}

/// Sidemode pair actually fed to the coupled-mode problem, honoring the
/// use_dressed switch.
inline std::pair<double, double> working_sidemodes(const PhysicalConfig& cfg) {
  const DerivedFrequencies d = sidemode_frequencies(cfg);
  if (cfg.use_dressed) return {d.omega_c_dressed, d.omega_d_dressed};
  return {d.omega_c, d.omega_d};
}

}  // namespace polotto::core
