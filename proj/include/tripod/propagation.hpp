#pragma once

// Analytic weak-field adiabatic propagation theory for the two circular probe
// components: absorption / phase-modulation / cross-coupling coefficients,
// cw solutions with the Kerr cross-phase term, polarization rotation and the
// scalar ellipticity estimate.
//
// Probe amplitudes are handled in Rabi-frequency units u_j = g E_j (rad/s),
// so the dimensionless intensity enters as g^2 I_j = |u_j|^2.

#include <complex>

#include "tripod/params.hpp"

namespace tripod {

struct PropagationCoeffs {
  double kappa1 = 0.0;  // amplitude absorption coefficient of E_1, cm^-1
  double kappa2 = 0.0;  // amplitude absorption coefficient of E_2, cm^-1
  double s1 = 0.0;      // phase-modulation coefficient of E_1, s/cm
  double s2 = 0.0;      // phase-modulation coefficient of E_2, s/cm
  std::complex<double> eta1;  // cross-coupling coefficient, cm^-1 s (per unit intensity)
  std::complex<double> eta2;
  double v_g = 0.0;     // common group velocity, cm/s
};

// Coefficient evaluation:
//   s_{1,2}     = (a0 Gamma / 4|Omega_d|^2) [1 + Delta(Delta +- Delta_d)/|Omega_d|^2]
//   v_g         = (1/c + s0)^-1 with s0 the zero-detuning s-coefficient
//   kappa_{1,2} = [gamma_c + Gamma (Delta +- Delta_d)^2/|Omega_d|^2] / v_g
//   eta_{1,2}   = N g^4 2 Delta / (2 c |Omega_d|^4 (2 Delta -+ i gamma_c))
// Requires |Omega_d| > 0.
PropagationCoeffs coefficients(const MediumParams& p, const DerivedParams& d,
                               const DriveZeemanConfig& z);

// CW outputs at position z.
struct CwResult {
  std::complex<double> u1;  // output amplitudes, Rabi units (rad/s)
  std::complex<double> u2;
  double phi1 = 0.0;        // accumulated envelope phases, rad
  double phi2 = 0.0;
  double rotation = 0.0;    // polarization rotation Phi = (phi2 - phi1)/2, rad
  double ellipticity_deviation = 0.0;  // sqrt(1 - eps^2) estimate
};

enum class KappaMode {
  exact,        // keep kappa1 != kappa2
  symmetrized,  // kappa1 = kappa2 = (kappa1 + kappa2)/2, polarimeter convention
};

// Attenuated, phase-shifted cw amplitudes after distance z, including the
// intensity-dependent cross-phase term with its saturation factor
// (1 - e^{-2 kappa z})/(2 kappa). Inputs are boundary amplitudes in Rabi
// units. The rotation field is always (phi2 - phi1)/2.
CwResult cw_solution(const MediumParams& p, const DerivedParams& d,
                     const DriveZeemanConfig& z, double z_cm,
                     std::complex<double> u1_in, std::complex<double> u2_in,
                     KappaMode mode = KappaMode::exact);

// Small-absorption polarization rotation (kappa z << 1):
//   Phi(z) = Delta z / v_g + Delta (Delta^2 + Delta_d^2) z / (v_g |Omega_d|^2)
//            - (Delta / v_g) (g^2 I(0) / |Omega_d|^2) z
// for equal input intensities g^2 I(0) = |u(0)|^2. The cross-phase (third)
// term carries the opposite sign from the linear term; this is what the
// phases phi_1, phi_2 of the equations of motion give, and the brute-force
// integrator confirms it.
double rotation_small_absorption(const PropagationCoeffs& c,
                                 const DriveZeemanConfig& z, double z_cm,
                                 double g2_intensity);

// Cubic-in-Delta contribution alone (reported by the magnetometer).
double rotation_cubic_term(const PropagationCoeffs& c, const DriveZeemanConfig& z,
                           double z_cm);

}  // namespace tripod
