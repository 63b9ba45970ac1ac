#pragma once

// Multimode quantum-field evolution in the negligible-absorption limit:
// coherent-state expectation values with collapse/revival, single-photon
// intensity transport, two-photon wavefunctions, mode-space amplitudes and
// controlled-phase gate metrics.
//
// Fields are expanded over discrete modes q in [-dq/2, dq/2] on a
// quantization box of length L; the equal-time commutator kernel is
// (L dq / 2 pi) sinc(dq (z - z')/2) in the continuum limit.

#include <complex>
#include <utility>
#include <vector>

#include "tripod/params.hpp"

namespace tripod {

// Discrete symmetric mode grid. dq is the full quantization bandwidth
// (M * spacing); the outermost mode satisfies max|q| <= dq/2.
struct ModeGrid {
  double length = 0.0;  // cm
  int m = 0;            // mode count, odd
  double dq = 0.0;      // cm^-1
  std::vector<double> q;

  double spacing() const { return dq / m; }

  // Mode spacing 2 pi / L, so translation phases at t = L/v_g are exactly 1.
  static ModeGrid canonical(double length, int m);
  // Canonical grid, checked against a physical bandwidth bound dq <= dq_max.
  static ModeGrid bounded(double length, int m, double dq_max);
};

// Medium quantities the quantum evolution needs. c is exposed so scaled
// desk-top parameter sets remain expressible.
struct QuantumConfig {
  double length = 0.0;       // cm
  double v_g = 0.0;          // cm/s
  double c = 0.0;            // cm/s
  double g2 = 0.0;           // g^2, (rad/s)^2
  double rabi_sq = 0.0;      // |Omega_d|^2, (rad/s)^2
  double delta = 0.0;        // rad/s
  double delta_d = 0.0;      // rad/s
  double dq = 0.0;           // quantization bandwidth, cm^-1
  double kappa_l = 0.0;      // advisory absorption-neglect figure

  double eta() const { return g2 / (v_g * rabi_sq); }  // XPM coefficient

  static QuantumConfig from(const MediumParams& p, const DerivedParams& d,
                            const DriveZeemanConfig& z);
};

// Cross-phase angles theta_{1,2}(z) = eta (Delta_d +- Delta) L dq z / (2 pi)
// and the small-field common value theta = eta Delta_d L^2 dq / (2 pi).
struct XpmAngles {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta = 0.0;

  static XpmAngles at(const QuantumConfig& cfg, double z);
  static XpmAngles common(double theta);
};

// Equal-time commutator kernel (L dq / 2 pi) sinc(dq (z - z')/2).
double sinc_commutator(double z, double zp, const ModeGrid& grid);

// Interaction locality kernel variants: the analytic sinc (continuum limit),
// the finite-M Dirichlet mode sum D(z-z')/M, or the ideal narrowband limit
// `unit` in which the conditional phase applies globally,
// Psi -> e^{i theta} f_i f_j (both the kernel and the envelope ratio -> 1).
enum class Kernel { sinc, dirichlet, unit };

double locality_kernel(double separation, const ModeGrid& grid, Kernel kernel);

// Multimode coherent amplitudes alpha_j^q for the two fields.
struct CoherentAmplitudes {
  std::vector<std::complex<double>> a1, a2;

  // alpha_j(tau) = sum_q alpha_j^q e^{-i q c tau}
  std::complex<double> alpha1_at(double tau, const ModeGrid& grid, double c) const;
  std::complex<double> alpha2_at(double tau, const ModeGrid& grid, double c) const;
};

// Expectation values <E_1>, <E_2> at (z, t) inside the medium:
//   <E_1> = alpha_1(tau) exp{ [e^{i theta_1(z)} - 1] 2 pi |alpha_2(tau)|^2 / (L dq) }
// with tau = t - z/v_g, and symmetrically for <E_2>.
std::pair<std::complex<double>, std::complex<double>> coherent_evolve(
    const CoherentAmplitudes& in, const ModeGrid& grid, const XpmAngles& angles,
    double z, double t, const QuantumConfig& cfg);

// Single-photon wavepacket, sum_q |xi^q|^2 = 1.
struct SinglePhotonState {
  std::vector<std::complex<double>> xi;

  double norm_sq() const;
  // Band-limited Gaussian spectrum centred at z0 with q-space width sigma_q;
  // rejects spectra whose band-edge truncation exceeds 1e-6 in energy.
  static SinglePhotonState gaussian(const ModeGrid& grid, double sigma_q, double z0);
};

// Spatial envelope f(x) = sum_q xi^q e^{i q x}.
std::complex<double> envelope_at(const SinglePhotonState& s, const ModeGrid& grid,
                                 double x);

// Photon-number density (cm^-1): |f(z c/v_g - c t)|^2 / L inside the medium
// (0 <= z < L), |f(z + L(c/v_g - 1) - c t)|^2 / L beyond it. Integrates to 1
// over z once the wavepacket is fully outside.
double single_photon_intensity(const SinglePhotonState& s, const ModeGrid& grid,
                               double z, double t, const QuantumConfig& cfg);

// Equal-time two-photon wavefunction after the interaction:
//   Psi(z, z', t) = f_i(x) f_j(x') + f_i(x) f_j(x) K(z' - z) (e^{i theta} - 1),
// x = z + L(c/v_g - 1) - c t. The second form avoids the f_j ratio, so nodes
// of f_j(x') are harmless.
std::complex<double> two_photon_equal_time(const SinglePhotonState& si,
                                           const SinglePhotonState& sj,
                                           const ModeGrid& grid, double theta,
                                           double z, double zp, double t,
                                           const QuantumConfig& cfg,
                                           Kernel kernel = Kernel::sinc);

// General-time variant with the kernel in retarded time,
// sinc[(d_omega/2)(tau - tau')], valid past the medium (z, z' >= L).
std::complex<double> two_photon_general(const SinglePhotonState& si,
                                        const SinglePhotonState& sj,
                                        const ModeGrid& grid, double theta_i,
                                        double z, double t, double zp, double tp,
                                        const QuantumConfig& cfg,
                                        Kernel kernel = Kernel::sinc);

// Psi sampled on the uniform nz x nz grid z_n = n L / nz over [0, L).
std::vector<std::complex<double>> two_photon_matrix(const SinglePhotonState& s1,
                                                    const SinglePhotonState& s2,
                                                    const ModeGrid& grid, double theta,
                                                    double t, const QuantumConfig& cfg,
                                                    int nz, Kernel kernel = Kernel::sinc);

// Same matrix at the exit time t = L/v_g, where the envelope argument
// collapses to z - L exactly (avoids catastrophic cancellation between the
// c/v_g terms when the medium is very slow).
std::vector<std::complex<double>> two_photon_matrix_exit(
    const SinglePhotonState& s1, const SinglePhotonState& s2, const ModeGrid& grid,
    double theta, const QuantumConfig& cfg, int nz, Kernel kernel = Kernel::sinc);

// Joint mode amplitudes xi^{qq'}.
struct TwoPhotonAmplitudes {
  int m = 0;
  std::vector<std::complex<double>> xi;  // row-major [q][q']

  double norm_sq() const;
  std::complex<double>& at(int iq, int iqp) { return xi[static_cast<std::size_t>(iq) * m + iqp]; }
  const std::complex<double>& at(int iq, int iqp) const { return xi[static_cast<std::size_t>(iq) * m + iqp]; }
};

// xi^{qq'}(t) = (1/L^2) int int Psi(z, z', t) e^{-iqz} e^{-iq'z'} dz dz' by
// rectangle quadrature over the box, exact for band-limited integrands.
// Requires at least 4 samples per shortest mode wavelength.
TwoPhotonAmplitudes state_amplitudes(const std::vector<std::complex<double>>& psi,
                                     int nz, const ModeGrid& grid);

// Overlap |<psi_in| e^{-i theta} |psi_out>| in mode space.
double mode_overlap_fidelity(const SinglePhotonState& s1, const SinglePhotonState& s2,
                             const TwoPhotonAmplitudes& out, double theta);

struct CphaseMetrics {
  double theta = 0.0;
  double fidelity = 0.0;
  bool pi_condition = false;  // (dq L / 2 pi)^2 > v_g |Omega_d|^2 / (c g^2)
  double norm_out = 0.0;
};

// Full pipeline at the medium exit, t = L/v_g: evolve the two-photon state,
// project back onto modes, report the conditional phase, the gate fidelity
// and whether theta can exceed pi.
CphaseMetrics cphase_metrics(const SinglePhotonState& s1, const SinglePhotonState& s2,
                             const ModeGrid& grid, const QuantumConfig& cfg,
                             int nz = 1024, Kernel kernel = Kernel::sinc);

}  // namespace tripod
