#pragma once

#include <numbers>

namespace polotto::constants {

// CODATA 2018 values.
inline constexpr double pi = std::numbers::pi_v<double>;

/// ħ — reduced Planck constant [J·s].
inline constexpr double hbar = 1.054571817e-34;

/// k_B — Boltzmann constant [J·K⁻¹] (exact since the 2019 SI).
inline constexpr double k_boltzmann = 1.380649e-23;

/// 1 u — atomic mass unit [kg].
inline constexpr double atomic_mass_unit = 1.66053906660e-27;

}  // namespace polotto::constants
