#include "tripod/quantum_xpm.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "tripod/constants.hpp"
#include "tripod/errors.hpp"
#include "tripod/propagation.hpp"

namespace tripod {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

ModeGrid ModeGrid::canonical(double length, int m) {
  if (!(length > 0.0)) throw validation_error("ModeGrid: length must be > 0");
  if (m < 3 || m % 2 == 0) throw validation_error("ModeGrid: mode count must be odd and >= 3");
  ModeGrid g;
  g.length = length;
  g.m = m;
  const double spacing = 2.0 * kPi / length;
  g.dq = m * spacing;
  g.q.resize(m);
  const int half = (m - 1) / 2;
  for (int i = 0; i < m; ++i) g.q[i] = (i - half) * spacing;
  return g;
}

ModeGrid ModeGrid::bounded(double length, int m, double dq_max) {
  ModeGrid g = canonical(length, m);
  const double qmax = std::abs(g.q.back());
  if (qmax > 0.5 * dq_max) {
    std::ostringstream os;
    os << "ModeGrid: max|q| = " << qmax << " cm^-1 exceeds half the allowed bandwidth "
       << 0.5 * dq_max;
    throw validation_error(os.str());
  }
  return g;
}

QuantumConfig QuantumConfig::from(const MediumParams& p, const DerivedParams& d,
                                  const DriveZeemanConfig& z) {
  QuantumConfig c;
  c.length = p.length;
  c.v_g = d.v_g;
  c.c = constants::c_light;
  c.g2 = d.g_coupling * d.g_coupling;
  c.rabi_sq = std::norm(z.omega_rabi);
  c.delta = z.delta;
  c.delta_d = z.delta_d;
  c.dq = d.dq;
  const PropagationCoeffs pc = coefficients(p, d, z);
  c.kappa_l = 0.5 * (pc.kappa1 + pc.kappa2) * p.length;
  return c;
}

XpmAngles XpmAngles::at(const QuantumConfig& cfg, double z) {
  XpmAngles a;
  const double base = cfg.eta() * cfg.length * cfg.dq / (2.0 * kPi);
  a.theta1 = base * (cfg.delta_d + cfg.delta) * z;
  a.theta2 = base * (cfg.delta_d - cfg.delta) * z;
  a.theta = base * cfg.delta_d * cfg.length;
  return a;
}

XpmAngles XpmAngles::common(double theta) { return {theta, theta, theta}; }

double sinc_commutator(double z, double zp, const ModeGrid& grid) {
  return grid.length * grid.dq / (2.0 * kPi) * sinc(0.5 * grid.dq * (z - zp));
}

double locality_kernel(double separation, const ModeGrid& grid, Kernel kernel) {
  switch (kernel) {
    case Kernel::sinc:
      return sinc(0.5 * grid.dq * separation);
    case Kernel::dirichlet: {
      // sum_q e^{iq s} / M over the symmetric grid
      const double a = 0.5 * grid.spacing() * separation;
      if (std::abs(std::sin(a)) < 1e-14) return 1.0;
      return std::sin(grid.m * a) / (grid.m * std::sin(a));
    }
    case Kernel::unit:
      return 1.0;
  }
  return 1.0;
}

cplx CoherentAmplitudes::alpha1_at(double tau, const ModeGrid& grid, double c) const {
  cplx s{0.0, 0.0};
  for (int i = 0; i < grid.m; ++i) s += a1[i] * std::exp(-kI * grid.q[i] * c * tau);
  return s;
}

cplx CoherentAmplitudes::alpha2_at(double tau, const ModeGrid& grid, double c) const {
  cplx s{0.0, 0.0};
  for (int i = 0; i < grid.m; ++i) s += a2[i] * std::exp(-kI * grid.q[i] * c * tau);
  return s;
}

std::pair<cplx, cplx> coherent_evolve(const CoherentAmplitudes& in, const ModeGrid& grid,
                                      const XpmAngles& angles, double z, double t,
                                      const QuantumConfig& cfg) {
  const double tau = t - z / cfg.v_g;
  const cplx a1 = in.alpha1_at(tau, grid, cfg.c);
  const cplx a2 = in.alpha2_at(tau, grid, cfg.c);
  const double per_mode = 2.0 * kPi / (grid.length * grid.dq);
  const cplx e1 =
      a1 * std::exp((std::exp(kI * angles.theta1) - 1.0) * std::norm(a2) * per_mode);
  const cplx e2 =
      a2 * std::exp((std::exp(kI * angles.theta2) - 1.0) * std::norm(a1) * per_mode);
  return {e1, e2};
}

double SinglePhotonState::norm_sq() const {
  double n = 0.0;
  for (const auto& x : xi) n += std::norm(x);
  return n;
}

SinglePhotonState SinglePhotonState::gaussian(const ModeGrid& grid, double sigma_q,
                                              double z0) {
  if (!(sigma_q > 0.0)) throw validation_error("SinglePhotonState: sigma_q must be > 0");
  const double qmax = std::abs(grid.q.back());
  // Band-edge amplitude must be negligible: out-of-band energy < 1e-6.
  if (std::exp(-qmax * qmax / (2.0 * sigma_q * sigma_q)) > 1e-6) {
    throw validation_error(
        "SinglePhotonState: sigma_q too wide for the mode grid (band truncation "
        "exceeds 1e-6)");
  }
  SinglePhotonState s;
  s.xi.resize(grid.m);
  double norm = 0.0;
  for (int i = 0; i < grid.m; ++i) {
    const double q = grid.q[i];
    const cplx amp = std::exp(-q * q / (4.0 * sigma_q * sigma_q)) *
                     std::exp(-kI * q * z0);
    s.xi[i] = amp;
    norm += std::norm(amp);
  }
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& x : s.xi) x *= scale;
  return s;
}

cplx envelope_at(const SinglePhotonState& s, const ModeGrid& grid, double x) {
  cplx f{0.0, 0.0};
  for (int i = 0; i < grid.m; ++i) f += s.xi[i] * std::exp(kI * grid.q[i] * x);
  return f;
}

double single_photon_intensity(const SinglePhotonState& s, const ModeGrid& grid,
                               double z, double t, const QuantumConfig& cfg) {
  if (z < 0.0) throw validation_error("single_photon_intensity: z must be >= 0");
  const double L = cfg.length;
  double arg;
  if (z < L) {
    arg = z * cfg.c / cfg.v_g - cfg.c * t;
  } else {
    arg = z + L * (cfg.c / cfg.v_g - 1.0) - cfg.c * t;
  }
  return std::norm(envelope_at(s, grid, arg)) / L;
}

std::complex<double> two_photon_equal_time(const SinglePhotonState& si,
                                           const SinglePhotonState& sj,
                                           const ModeGrid& grid, double theta,
                                           double z, double zp, double t,
                                           const QuantumConfig& cfg, Kernel kernel) {
  const double shift = cfg.length * (cfg.c / cfg.v_g - 1.0) - cfg.c * t;
  const cplx fi = envelope_at(si, grid, z + shift);
  const cplx fj_zp = envelope_at(sj, grid, zp + shift);
  if (kernel == Kernel::unit) {
    // Ideal narrowband limit: sinc -> 1 and envelope ratio -> 1, so the
    // conditional phase applies globally.
    return fi * fj_zp * std::exp(kI * theta);
  }
  const cplx fj_z = envelope_at(sj, grid, z + shift);
  const double k = locality_kernel(zp - z, grid, kernel);
  return fi * fj_zp + fi * fj_z * k * (std::exp(kI * theta) - 1.0);
}

std::complex<double> two_photon_general(const SinglePhotonState& si,
                                        const SinglePhotonState& sj,
                                        const ModeGrid& grid, double theta_i,
                                        double z, double t, double zp, double tp,
                                        const QuantumConfig& cfg, Kernel kernel) {
  const double tau = t - cfg.length / cfg.v_g - (z - cfg.length) / cfg.c;
  const double taup = tp - cfg.length / cfg.v_g - (zp - cfg.length) / cfg.c;
  const cplx fi = envelope_at(si, grid, -cfg.c * tau);
  const cplx fj_p = envelope_at(sj, grid, -cfg.c * taup);
  if (kernel == Kernel::unit) {
    return fi * fj_p * std::exp(kI * theta_i);
  }
  const cplx fj = envelope_at(sj, grid, -cfg.c * tau);
  // d_omega (tau - tau')/2 = dq (z' - z)/2 at equal times
  const double k = locality_kernel(cfg.c * (tau - taup), grid, kernel);
  return fi * fj_p + fi * fj * k * (std::exp(kI * theta_i) - 1.0);
}

namespace {

std::vector<cplx> matrix_with_shift(const SinglePhotonState& s1,
                                    const SinglePhotonState& s2, const ModeGrid& grid,
                                    double theta, double shift,
                                    const QuantumConfig& cfg, int nz, Kernel kernel);

}  // namespace

std::vector<cplx> two_photon_matrix(const SinglePhotonState& s1,
                                    const SinglePhotonState& s2, const ModeGrid& grid,
                                    double theta, double t, const QuantumConfig& cfg,
                                    int nz, Kernel kernel) {
  const double shift = cfg.length * (cfg.c / cfg.v_g - 1.0) - cfg.c * t;
  return matrix_with_shift(s1, s2, grid, theta, shift, cfg, nz, kernel);
}

std::vector<cplx> two_photon_matrix_exit(const SinglePhotonState& s1,
                                         const SinglePhotonState& s2,
                                         const ModeGrid& grid, double theta,
                                         const QuantumConfig& cfg, int nz,
                                         Kernel kernel) {
  return matrix_with_shift(s1, s2, grid, theta, -cfg.length, cfg, nz, kernel);
}

namespace {

std::vector<cplx> matrix_with_shift(const SinglePhotonState& s1,
                                    const SinglePhotonState& s2, const ModeGrid& grid,
                                    double theta, double shift,
                                    const QuantumConfig& cfg, int nz, Kernel kernel) {
  if (nz < 8) throw validation_error("two_photon_matrix: nz must be >= 8");
  const double L = cfg.length;
  const double dz = L / nz;

  std::vector<cplx> f1(nz), f2(nz);
  for (int n = 0; n < nz; ++n) {
    const double x = n * dz + shift;
    f1[n] = envelope_at(s1, grid, x);
    f2[n] = envelope_at(s2, grid, x);
  }
  std::vector<cplx> psi(static_cast<std::size_t>(nz) * nz);
  if (kernel == Kernel::unit) {
    const cplx phase = std::exp(kI * theta);
    for (int n = 0; n < nz; ++n) {
      const cplx a = f1[n] * phase;
      cplx* row = &psi[static_cast<std::size_t>(n) * nz];
      for (int m = 0; m < nz; ++m) row[m] = a * f2[m];
    }
    return psi;
  }
  // Kernel depends only on the index separation.
  std::vector<double> kd(2 * nz - 1);
  for (int d = -(nz - 1); d <= nz - 1; ++d) {
    kd[d + nz - 1] = locality_kernel(d * dz, grid, kernel);
  }
  const cplx phase = std::exp(kI * theta) - 1.0;
  for (int n = 0; n < nz; ++n) {
    const cplx a = f1[n];
    const cplx b = f1[n] * f2[n] * phase;
    cplx* row = &psi[static_cast<std::size_t>(n) * nz];
    const double* krow = &kd[nz - 1 - n];
    for (int m = 0; m < nz; ++m) {
      row[m] = a * f2[m] + b * krow[m];
    }
  }
  return psi;
}

}  // namespace

double TwoPhotonAmplitudes::norm_sq() const {
  double n = 0.0;
  for (const auto& x : xi) n += std::norm(x);
  return n;
}

TwoPhotonAmplitudes state_amplitudes(const std::vector<cplx>& psi, int nz,
                                     const ModeGrid& grid) {
  if (static_cast<std::size_t>(nz) * nz != psi.size()) {
    throw validation_error("state_amplitudes: psi is not an nz x nz matrix");
  }
  const double qmax = std::abs(grid.q.back());
  const double min_samples = 4.0 * qmax * grid.length / (2.0 * kPi);
  if (nz < min_samples) {
    std::ostringstream os;
    os << "state_amplitudes: grid too coarse, need at least " << std::ceil(min_samples)
       << " samples for 4 points per shortest mode wavelength, got " << nz;
    throw validation_error(os.str());
  }
  const int m = grid.m;
  const double dz = grid.length / nz;
  // Phase table P[n][k] = e^{-i q_k z_n} dz / L.
  std::vector<cplx> P(static_cast<std::size_t>(nz) * m);
  const double w = dz / grid.length;
  for (int n = 0; n < nz; ++n) {
    const double z = n * dz;
    for (int k = 0; k < m; ++k) {
      P[static_cast<std::size_t>(n) * m + k] = std::exp(-kI * grid.q[k] * z) * w;
    }
  }
  // A[k][mm] = sum_n P[n][k] psi[n][mm]
  std::vector<cplx> A(static_cast<std::size_t>(m) * nz, cplx{0.0, 0.0});
  for (int n = 0; n < nz; ++n) {
    const cplx* prow = &P[static_cast<std::size_t>(n) * m];
    const cplx* psirow = &psi[static_cast<std::size_t>(n) * nz];
    for (int k = 0; k < m; ++k) {
      const cplx pk = prow[k];
      cplx* arow = &A[static_cast<std::size_t>(k) * nz];
      for (int mm = 0; mm < nz; ++mm) {
        arow[mm] += pk * psirow[mm];
      }
    }
  }
  TwoPhotonAmplitudes out;
  out.m = m;
  out.xi.assign(static_cast<std::size_t>(m) * m, cplx{0.0, 0.0});
  for (int k = 0; k < m; ++k) {
    const cplx* arow = &A[static_cast<std::size_t>(k) * nz];
    for (int kp = 0; kp < m; ++kp) {
      cplx acc{0.0, 0.0};
      for (int n = 0; n < nz; ++n) {
        acc += arow[n] * P[static_cast<std::size_t>(n) * m + kp];
      }
      out.at(k, kp) = acc;
    }
  }
  return out;
}

double mode_overlap_fidelity(const SinglePhotonState& s1, const SinglePhotonState& s2,
                             const TwoPhotonAmplitudes& out, double theta) {
  const int m = out.m;
  cplx acc{0.0, 0.0};
  for (int k = 0; k < m; ++k) {
    for (int kp = 0; kp < m; ++kp) {
      acc += std::conj(s1.xi[k] * s2.xi[kp]) * out.at(k, kp);
    }
  }
  return std::abs(std::exp(-kI * theta) * acc);
}

CphaseMetrics cphase_metrics(const SinglePhotonState& s1, const SinglePhotonState& s2,
                             const ModeGrid& grid, const QuantumConfig& cfg, int nz,
                             Kernel kernel) {
  CphaseMetrics m;
  const XpmAngles angles = XpmAngles::at(cfg, cfg.length);
  m.theta = angles.theta;
  const auto psi = two_photon_matrix_exit(s1, s2, grid, m.theta, cfg, nz, kernel);
  const TwoPhotonAmplitudes out = state_amplitudes(psi, nz, grid);
  m.norm_out = out.norm_sq();
  m.fidelity = mode_overlap_fidelity(s1, s2, out, m.theta);
  const double lhs = std::pow(cfg.dq * cfg.length / (2.0 * kPi), 2);
  const double rhs = cfg.v_g * cfg.rabi_sq / (cfg.c * cfg.g2);
  m.pi_condition = lhs > rhs;
  return m;
}

}  // namespace tripod
