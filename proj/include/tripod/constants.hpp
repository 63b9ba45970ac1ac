#pragma once

// Physical constants, Gaussian-CGS units.

namespace tripod::constants {

inline constexpr double c_light = 2.99792458e10;  // speed of light, cm/s
inline constexpr double hbar = 1.0546e-27;        // reduced Planck constant, erg s
inline constexpr double mu_bohr = 9.274e-21;      // Bohr magneton, erg/G

}  // namespace tripod::constants
