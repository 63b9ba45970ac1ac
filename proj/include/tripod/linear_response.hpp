#pragma once

// Steady-state linear response of the driven tripod medium: complex
// susceptibility of each circular probe component versus probe detuning.
//
// chi is normalized so that Im(chi) is the intensity absorption coefficient
// in units of a0 (the bare two-level resonant value maps to exactly 1) and
// Re(chi) is the matching dispersion. The cw amplitude obeys
//   dE/dz = i (a0/2) chi E.

#include <complex>
#include <vector>

#include "tripod/params.hpp"

namespace tripod {

// Steady-state probe coherence per unit probe Rabi frequency,
// sigma_j3 / (g E_j), from the exact 2x2 solve of the weak-probe
// {sigma_j3, sigma_j4} subsystem with populations 1/2 in |1>,|2>:
//
//   sigma_j3/(gE_j) = -(i/2) [i(delta_j - delta_d) - gamma_c]
//       / { (i delta_j - Gamma/2)[i(delta_j - delta_d) - gamma_c] + |Omega_d|^2 }
//
// Units: 1/(rad/s). With omega_rabi == 0 the expression reduces to the bare
// two-level form -(i/2)/(i delta_j - Gamma/2).
std::complex<double> steady_state_coherence(double delta_j, double delta_d,
                                            std::complex<double> omega_rabi,
                                            double gamma, double gamma_c);

// Per-detuning complex linear response of both circular components.
struct ComplexResponse {
  std::vector<double> detunings;            // delta = omega_p - omega_31, rad/s
  std::vector<std::complex<double>> chi1;   // E_1 response, a0 units
  std::vector<std::complex<double>> chi2;   // E_2 response, a0 units
};

// chi_j(delta) = Gamma * steady_state_coherence(delta_j, ...) with
// delta_1 = delta - Delta and delta_2 = delta + Delta. Requires a monotone
// detuning grid.
ComplexResponse spectra(const MediumParams& p, const DerivedParams& d,
                        const DriveZeemanConfig& z,
                        const std::vector<double>& delta_grid);

}  // namespace tripod
