#pragma once

// Static medium parameters, derived quantities and regime validation for a
// driven tripod-atom medium: three (meta)stable ground states |1>,|2>,|4>
// coupled to one excited state |3>. The two circular probe components act on
// |1>->|3> and |2>->|3>, a strong classical drive on |4>->|3>.
//
// Unit policy: Gaussian-CGS at the API boundary (rad/s, cm, G, erg).
// Internally, heavy numerics run in units of the excited-state decay rate.

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace tripod {

// All static atom/medium constants.
struct MediumParams {
  double gamma;     // excited-state decay rate of |3>, rad/s
  double gamma_c;   // ground-state spin coherence relaxation rate, rad/s
  double density;   // atomic number density, cm^-3
  double length;    // medium length, cm
  double area;      // beam cross-sectional area, cm^2
  double omega_p;   // probe carrier frequency, rad/s
  double omega_d;   // drive carrier frequency, rad/s
  double omega_31;  // unshifted probe resonance (|1>,|2> -> |3>), rad/s
  double omega_34;  // unshifted drive resonance (|4> -> |3>), rad/s
  double g_f;       // ground-state gyromagnetic factor
  double g_fp;      // excited-hyperfine gyromagnetic factor of |4>

  // Throws validation_error naming the offending field.
  void validate() const;
};

// Drive Rabi frequency plus the magnetic-field-derived Zeeman shifts.
//
// delta       = mu_B g_F B / hbar  (shift of the M_F = +1 sublevel)
// delta_prime = mu_B g_F' M_F' B / hbar in the collinear geometry, and 0 in
//               the perpendicular geometry where the drive couples to M_F'=0.
// delta_d     = omega_d - omega_34 + delta_prime
struct DriveZeemanConfig {
  std::complex<double> omega_rabi{0.0, 0.0};  // drive Rabi frequency, rad/s
  double b_field = 0.0;                       // magnetic field, G
  double delta = 0.0;                         // ground Zeeman shift, rad/s
  double delta_prime = 0.0;                   // excited Zeeman shift, rad/s
  double delta_d = 0.0;                       // drive detuning, rad/s

  static DriveZeemanConfig collinear(std::complex<double> rabi, double b_gauss,
                                     const MediumParams& p, int m_f_prime);
  static DriveZeemanConfig perpendicular(std::complex<double> rabi,
                                         double b_gauss,
                                         const MediumParams& p);
};

// Quantities derived from MediumParams (+ drive context for v_g).
struct DerivedParams {
  double a0;             // linear resonant absorption coefficient, cm^-1
  double g_coupling;     // atom-field coupling constant g, rad/s
  double dipole;         // probe transition dipole moment, esu cm
  double n_atoms;        // total atom number N = rho A L
  double v_g;            // group velocity at zero detunings, cm/s
  double eit_bandwidth;  // EIT-window bandwidth delta-omega, rad/s
  double dq;             // quantization bandwidth delta-q = delta-omega/c, cm^-1
  bool slow_light;       // a0 c Gamma > 100 * 4|Omega_d|^2
};

// Computes DerivedParams. Exactly one of dipole_esu_cm / a0_per_cm must be
// given to fix the coupling strength; if both are given they must agree to 1%
// through a0 = 4 pi wp^2... (consistency check), otherwise validation_error.
//
// The two coupling definitions
//   a0 = 4 pi p13^2 omega_p rho / (hbar c Gamma)
//   g  = p13 sqrt(2 pi omega_p / (hbar A L))
// satisfy N g^2 = a0 c Gamma / 2 identically; both are maintained.
DerivedParams derive(const MediumParams& p,
                     std::optional<double> dipole_esu_cm,
                     std::optional<double> a0_per_cm,
                     const DriveZeemanConfig& drive);

struct RegimeCheck {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // ratio to the pass threshold; >= 1 passes
  std::string detail;
};

struct RegimeReport {
  std::vector<RegimeCheck> checks;
  bool all_pass() const;
  const RegimeCheck& check(const std::string& name) const;
};

// Report-only validation of the operating-regime inequalities:
//   weak probe          max gE << |Omega_d|              (ratio <= 0.1)
//   EIT condition       |Omega_d|^2 >> gamma_c Gamma     (factor 10)
//   adiabaticity        T_p >> 1/|Delta|, or t >> 1/gamma_c for any Delta
//   slow light          a0 c Gamma >> 4 |Omega_d|^2      (factor 100)
//   small absorption    v_g/gamma_c >> L (factor 10) and
//                       Delta^2 + Delta_d^2 <= gamma_c |Omega_d|^2 / Gamma
RegimeReport validate_regime(const MediumParams& p, const DerivedParams& d,
                             const DriveZeemanConfig& z, double probe_rabi_max,
                             double pulse_duration);

}  // namespace tripod
