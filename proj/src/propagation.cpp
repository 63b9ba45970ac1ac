#include "tripod/propagation.hpp"

#include <cmath>

#include "tripod/constants.hpp"
#include "tripod/errors.hpp"

namespace tripod {

namespace {

// (1 - e^{-2 kappa z}) / (2 kappa), continuous through kappa -> 0.
double saturation_factor(double kappa, double z) {
  const double x = 2.0 * kappa * z;
  if (std::abs(x) < 1e-12) return z * (1.0 - 0.5 * x);
  return -std::expm1(-x) / (2.0 * kappa);
}

}  // namespace

PropagationCoeffs coefficients(const MediumParams& p, const DerivedParams& d,
                               const DriveZeemanConfig& z) {
  const double rabi_sq = std::norm(z.omega_rabi);
  if (!(rabi_sq > 0.0)) {
    throw validation_error("coefficients: |Omega_d| must be > 0 (EIT undefined)");
  }
  const double c = constants::c_light;
  const double G = p.gamma;
  const double D = z.delta;
  const double Dd = z.delta_d;

  PropagationCoeffs out;
  const double s0 = d.a0 * G / (4.0 * rabi_sq);  // N g^2/(2 c |Omega_d|^2)
  out.s1 = s0 * (1.0 + D * (D + Dd) / rabi_sq);
  out.s2 = s0 * (1.0 + D * (D - Dd) / rabi_sq);
  out.v_g = 1.0 / (1.0 / c + s0);
  out.kappa1 = (p.gamma_c + G * (D + Dd) * (D + Dd) / rabi_sq) / out.v_g;
  out.kappa2 = (p.gamma_c + G * (D - Dd) * (D - Dd) / rabi_sq) / out.v_g;
  if (D == 0.0) {
    out.eta1 = out.eta2 = 0.0;
  } else {
    const double g2 = d.g_coupling * d.g_coupling;
    const std::complex<double> i{0.0, 1.0};
    const std::complex<double> common = s0 * g2 * 2.0 * D / rabi_sq;
    out.eta1 = common / (2.0 * D - i * p.gamma_c);
    out.eta2 = common / (2.0 * D + i * p.gamma_c);
  }
  return out;
}

CwResult cw_solution(const MediumParams& p, const DerivedParams& d,
                     const DriveZeemanConfig& z, double z_cm,
                     std::complex<double> u1_in, std::complex<double> u2_in,
                     KappaMode mode) {
  const PropagationCoeffs c = coefficients(p, d, z);
  const double rabi_sq = std::norm(z.omega_rabi);
  const double D = z.delta;
  const double Dd = z.delta_d;

  double k1 = c.kappa1, k2 = c.kappa2;
  if (mode == KappaMode::symmetrized) k1 = k2 = 0.5 * (c.kappa1 + c.kappa2);

  const double g2I1 = std::norm(u1_in);
  const double g2I2 = std::norm(u2_in);

  CwResult r;
  r.phi1 = -(D + Dd) * z_cm / c.v_g - D * (D + Dd) * (D + Dd) * z_cm / (c.v_g * rabi_sq) +
           (D + Dd) / c.v_g * (g2I2 / rabi_sq) * saturation_factor(k2, z_cm);
  r.phi2 = (D - Dd) * z_cm / c.v_g + D * (D - Dd) * (D - Dd) * z_cm / (c.v_g * rabi_sq) -
           (D - Dd) / c.v_g * (g2I1 / rabi_sq) * saturation_factor(k1, z_cm);
  const std::complex<double> i{0.0, 1.0};
  r.u1 = u1_in * std::exp(-k1 * z_cm) * std::exp(i * r.phi1);
  r.u2 = u2_in * std::exp(-k2 * z_cm) * std::exp(i * r.phi2);
  r.rotation = 0.5 * (r.phi2 - r.phi1);
  r.ellipticity_deviation = 2.0 * p.gamma * D * Dd * z_cm / (c.v_g * rabi_sq);
  return r;
}

double rotation_small_absorption(const PropagationCoeffs& c,
                                 const DriveZeemanConfig& z, double z_cm,
                                 double g2_intensity) {
  const double rabi_sq = std::norm(z.omega_rabi);
  const double D = z.delta;
  const double Dd = z.delta_d;
  return D * z_cm / c.v_g + D * (D * D + Dd * Dd) * z_cm / (c.v_g * rabi_sq) -
         (D / c.v_g) * (g2_intensity / rabi_sq) * z_cm;
}

double rotation_cubic_term(const PropagationCoeffs& c, const DriveZeemanConfig& z,
                           double z_cm) {
  const double rabi_sq = std::norm(z.omega_rabi);
  return z.delta * (z.delta * z.delta + z.delta_d * z.delta_d) * z_cm /
         (c.v_g * rabi_sq);
}

}  // namespace tripod
