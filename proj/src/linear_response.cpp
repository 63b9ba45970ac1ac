#include "tripod/linear_response.hpp"

#include <cmath>

#include "tripod/errors.hpp"

namespace tripod {

namespace {

// Dimensionless response in Gamma units. Assembled from explicitly real
// numerator/denominator pieces so that Im(chi) >= 0 holds in floating point
// as well (it is a sum of squares over |D|^2).
std::complex<double> chi_gamma_units(double d1, double dd, double rabi_sq,
                                     double gc) {
  if (rabi_sq == 0.0) {
    // Drive off: bare two-level response -(i/2)/(i d1 - 1/2).
    const double den = d1 * d1 + 0.25;
    if (den < 1e-30) {
      throw numeric_error("steady_state_coherence: singular two-level denominator");
    }
    return {-0.5 * d1 / den, 0.25 / den};
  }
  const double x = d1 - dd;  // two-photon detuning
  // D = (i d1 - 1/2)(i x - gc) + |w|^2
  const std::complex<double> D{-d1 * x + 0.5 * gc + rabi_sq, -0.5 * x - d1 * gc};
  const double abs2 = std::norm(D);
  if (abs2 < 1e-60) {
    throw numeric_error(
        "steady_state_coherence: singular denominator (two-photon resonance with "
        "Gamma = gamma_c = 0)");
  }
  const double r2 = x * x + gc * gc;  // |i x - gc|^2
  const double re = (x * rabi_sq - d1 * r2) / (2.0 * abs2);
  const double im = (0.25 * r2 + 0.5 * gc * rabi_sq) / abs2;
  return {re, im};
}

}  // namespace

std::complex<double> steady_state_coherence(double delta_j, double delta_d,
                                            std::complex<double> omega_rabi,
                                            double gamma, double gamma_c) {
  if (!(gamma > 0.0)) {
    throw validation_error("steady_state_coherence: gamma must be > 0");
  }
  const double g = gamma;
  return chi_gamma_units(delta_j / g, delta_d / g, std::norm(omega_rabi) / (g * g),
                         gamma_c / g) /
         g;
}

ComplexResponse spectra(const MediumParams& p, const DerivedParams& /*d*/,
                        const DriveZeemanConfig& z,
                        const std::vector<double>& delta_grid) {
  if (delta_grid.size() >= 2) {
    const bool increasing = delta_grid[1] > delta_grid[0];
    for (std::size_t i = 1; i < delta_grid.size(); ++i) {
      const bool step_up = delta_grid[i] > delta_grid[i - 1];
      if (step_up != increasing || delta_grid[i] == delta_grid[i - 1]) {
        throw validation_error("spectra: detuning grid must be strictly monotone");
      }
    }
  }
  const double g = p.gamma;
  const double rabi_sq = std::norm(z.omega_rabi) / (g * g);
  const double dd = z.delta_d / g;
  const double gc = p.gamma_c / g;
  const double dz = z.delta / g;

  ComplexResponse r;
  r.detunings = delta_grid;
  r.chi1.reserve(delta_grid.size());
  r.chi2.reserve(delta_grid.size());
  for (const double delta : delta_grid) {
    const double d = delta / g;
    r.chi1.push_back(chi_gamma_units(d - dz, dd, rabi_sq, gc));
    r.chi2.push_back(chi_gamma_units(d + dz, dd, rabi_sq, gc));
  }
  return r;
}

}  // namespace tripod
