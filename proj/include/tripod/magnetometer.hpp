#pragma once

// Balanced-polarimeter magnetometer model: detector signal, atomic and
// photon-counting shot noise, and the minimum detectable magnetic field.

#include <string>
#include <vector>

#include "tripod/params.hpp"
#include "tripod/propagation.hpp"

namespace tripod {

struct MagnetometerConfig {
  MediumParams medium;
  std::complex<double> omega_rabi{0.0, 0.0};  // rad/s
  int m_f_prime = 1;                          // collinear geometry sublevel
  double b_field = 0.0;                       // G
  double p_in = 0.0;                          // input power, erg/s
  double t_m = 0.0;                           // measurement time, s
  double detector_efficiency = 1.0;           // multiplier on n_in
  std::optional<double> dipole;               // esu cm
  std::optional<double> a0;                   // cm^-1

  void validate() const;
};

struct MagnetometerResult {
  double n_in = 0.0;          // photons through the medium during t_m
  double signal = 0.0;        // photocount difference of the two channels
  double noise_atomic = 0.0;  // photocounts
  double noise_shot = 0.0;    // photocounts
  double b_min_closed = 0.0;  // closed-form minimum detectable field, G
  double b_min_root = 0.0;    // field where signal equals total noise, G
  double kappa_l = 0.0;       // symmetrized kappa * L
  double phi = 0.0;           // rotation Phi(L), rad
  double phi_cubic = 0.0;     // cubic-in-Delta contribution to Phi, rad
  double bandwidth = 0.0;     // EIT-window bandwidth, rad/s
  double delta = 0.0;         // ground Zeeman shift, rad/s
  double ellipticity_deviation = 0.0;  // sqrt(1 - eps^2) scalar estimate
};

// S = 2 n_in e^{-2 kappa L} sin(Phi) cos(Phi), kappa symmetrized.
double signal(const MagnetometerConfig& cfg);

// (atomic, shot) noise photocounts:
//   N_at   = a0 Gamma^2 gamma_c^2 A n_in / (32 pi |Omega_d|^4 L)  for Delta < gamma_c;
//            outside that window the excited population is taken from the
//            steady-state coherences, sigma_33 = |sigma_13|^2 + |sigma_23|^2,
//            which reduces to the same expression as Delta -> 0.
//   N_shot = sqrt((1 + e^{-2 kappa L}) n_in / 2)
std::pair<double, double> noise(const MagnetometerConfig& cfg);

// Closed-form minimum detectable field 2 hbar |Omega_d|^2 /
// (|g_F| mu_B a0 L Gamma sqrt(n_in)); the root-found value solves
// signal(B) = noise(B) on the full nonlinear signal.
double b_min(const MagnetometerConfig& cfg);

// Full single-point evaluation.
MagnetometerResult analyze(const MagnetometerConfig& cfg);

struct SweepRow {
  double axis_value = 0.0;
  MagnetometerResult result;
  RegimeReport regime;
};

// axis is one of: omega_rabi, density, length, power, t_m, b_field
// (the last doubles as the rotation-vs-field emitter: B vs Phi, kappa L,
// ellipticity).
std::vector<SweepRow> sensitivity_sweep(const MagnetometerConfig& cfg,
                                        const std::string& axis,
                                        const std::vector<double>& values,
                                        int threads = 1);

}  // namespace tripod
