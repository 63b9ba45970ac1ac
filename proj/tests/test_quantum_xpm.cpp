#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "tripod/errors.hpp"
#include "tripod/quantum_xpm.hpp"

using namespace tripod;

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// Scaled desk configuration: unit box, unit group velocity, c/v_g = 100,
// eta = 1 so theta = Delta_d * (dq L / 2 pi) * L.
QuantumConfig desk_config(const ModeGrid& grid, double theta) {
  QuantumConfig c;
  c.length = grid.length;
  c.v_g = 1.0;
  c.c = 100.0;
  c.g2 = 1.0;
  c.rabi_sq = 1.0;
  c.delta = 0.0;
  c.dq = grid.dq;
  c.delta_d = theta * 2.0 * kPi / (c.eta() * grid.length * grid.length * grid.dq);
  c.kappa_l = 0.0;
  return c;
}

CoherentAmplitudes single_mode_alphas(const ModeGrid& grid, double a1, double a2) {
  CoherentAmplitudes in;
  in.a1.assign(grid.m, cplx{0.0, 0.0});
  in.a2.assign(grid.m, cplx{0.0, 0.0});
  in.a1[(grid.m - 1) / 2] = a1;
  in.a2[(grid.m - 1) / 2] = a2;
  return in;
}

}  // namespace

TEST_CASE("mode grid construction and bounds") {
  const ModeGrid g = ModeGrid::canonical(1.0, 401);
  CHECK(g.m == 401);
  CHECK(g.q.size() == 401);
  CHECK(g.q[200] == 0.0);
  CHECK(g.spacing() == doctest::Approx(2.0 * kPi).epsilon(1e-15));
  CHECK(g.dq == doctest::Approx(401 * 2.0 * kPi).epsilon(1e-15));
  CHECK(std::abs(g.q.back()) <= 0.5 * g.dq);

  CHECK_THROWS_AS(ModeGrid::canonical(1.0, 400), validation_error);
  CHECK_THROWS_AS(ModeGrid::bounded(1.0, 401, 100.0), validation_error);
  CHECK_NOTHROW(ModeGrid::bounded(1.0, 401, 402 * 2.0 * kPi));
}

TEST_CASE("commutator kernel: value at coincidence, first zero, mode-sum oracle") {
  const ModeGrid g = ModeGrid::canonical(2.0, 201);
  CHECK(sinc_commutator(0.3, 0.3, g) ==
        doctest::Approx(g.length * g.dq / (2.0 * kPi)).epsilon(1e-15));

  const double first_zero = 2.0 * kPi / g.dq;
  CHECK(std::abs(sinc_commutator(0.0, first_zero, g)) < 1e-12 * g.length * g.dq);

  // Mid-separation value against the discrete mode sum with the grid-spacing
  // normalization (spacing * L / 2 pi = 1 on the canonical grid).
  for (const double x : {0.3 * first_zero, 0.7 * first_zero, 1.9 * first_zero}) {
    cplx acc{0.0, 0.0};
    for (const double q : g.q) acc += std::exp(cplx{0.0, q * x});
    const double mode_sum = acc.real() * g.spacing() * g.length / (2.0 * kPi);
    const double kernel = sinc_commutator(x, 0.0, g);
    CHECK(std::abs(kernel - mode_sum) /
              (g.length * g.dq / (2.0 * kPi)) < 1e-3);
    // Same statement through the normalized kernels.
    CHECK(std::abs(locality_kernel(x, g, Kernel::sinc) -
                   locality_kernel(x, g, Kernel::dirichlet)) < 1e-3);
  }
}

TEST_CASE("coherent-state evolution: revival, maximal dephasing, quarter turn") {
  const ModeGrid g = ModeGrid::canonical(1.0, 401);
  const double per_mode = g.length * g.dq / (2.0 * kPi);  // modes in the box
  const CoherentAmplitudes in = single_mode_alphas(g, 0.7, std::sqrt(per_mode));
  const QuantumConfig cfg = desk_config(g, 0.0);
  const double z = cfg.length, t = cfg.length / cfg.v_g;

  SUBCASE("full revival at theta = 2 pi") {
    const auto [e1, e2] = coherent_evolve(in, g, XpmAngles::common(2.0 * kPi), z, t, cfg);
    CHECK(std::abs(e1 - cplx{0.7, 0.0}) < 1e-10);
    CHECK(std::abs(e2 - cplx{std::sqrt(per_mode), 0.0}) <
          1e-10 * std::sqrt(per_mode));
  }

  SUBCASE("maximal dephasing at theta = pi") {
    const auto [e1, e2] = coherent_evolve(in, g, XpmAngles::common(kPi), z, t, cfg);
    const double expected = 0.7 * std::exp(-4.0 * kPi * per_mode / (g.length * g.dq));
    CHECK(std::abs(e1) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(std::arg(e1) == doctest::Approx(0.0).epsilon(1e-12));
    (void)e2;
  }

  SUBCASE("theta = pi/2 with one photon per mode: amplitude 1/e, phase 1 rad") {
    // |alpha_2|^2 = L dq / (2 pi) makes the exponent (e^{i pi/2} - 1).
    const auto [e1, e2] = coherent_evolve(in, g, XpmAngles::common(kPi / 2.0), z, t, cfg);
    CHECK(std::abs(e1) == doctest::Approx(0.7 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(std::arg(e1) == doctest::Approx(1.0).epsilon(1e-12));
    (void)e2;
  }

  SUBCASE("evolution is 2 pi periodic in theta") {
    const auto [a, b] = coherent_evolve(in, g, XpmAngles::common(1.234), z, t, cfg);
    const auto [ap, bp] =
        coherent_evolve(in, g, XpmAngles::common(1.234 + 2.0 * kPi), z, t, cfg);
    CHECK(std::abs(a - ap) < 1e-12 * std::abs(a));
    CHECK(std::abs(b - bp) < 1e-12 * std::abs(b));
  }
}

TEST_CASE("weak cross-phase reproduces the classical Kerr result at O(theta^2)") {
  const ModeGrid g = ModeGrid::canonical(1.0, 401);
  const QuantumConfig cfg = desk_config(g, 0.0);
  const double a2_sq = 2.5;
  const CoherentAmplitudes in = single_mode_alphas(g, 1.0, std::sqrt(a2_sq));
  const double w = 2.0 * kPi * a2_sq / (g.length * g.dq);

  auto err_at = [&](double theta) {
    const auto [e1, e2] =
        coherent_evolve(in, g, XpmAngles::common(theta), cfg.length,
                        cfg.length / cfg.v_g, cfg);
    (void)e2;
    const cplx classical = std::exp(cplx{0.0, theta * w});
    return std::abs(e1 - classical);
  };
  const double e1 = err_at(1e-1), e2 = err_at(1e-2), e3 = err_at(1e-3);
  CHECK(e1 / e2 == doctest::Approx(100.0).epsilon(0.15));
  CHECK(e2 / e3 == doctest::Approx(100.0).epsilon(0.15));
}

TEST_CASE("single-photon transport: compression inside, restoration outside") {
  const ModeGrid g = ModeGrid::canonical(1.0, 401);
  const QuantumConfig cfg = desk_config(g, 0.0);
  const double sigma_q = g.dq / 12.0;
  const SinglePhotonState s = SinglePhotonState::gaussian(g, sigma_q, -0.5);
  CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));

  auto fwhm = [&](double t, double z_lo, double z_hi, int n) {
    std::vector<double> val(n);
    double peak = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = z_lo + (z_hi - z_lo) * i / (n - 1);
      val[i] = single_photon_intensity(s, g, z, t, cfg);
      peak = std::max(peak, val[i]);
    }
    int lo = 0, hi = n - 1;
    while (val[lo] < 0.5 * peak) ++lo;
    while (val[hi] < 0.5 * peak) --hi;
    return (z_hi - z_lo) * (hi - lo) / (n - 1);
  };

  // Envelope FWHM in x: |f|^2 ~ exp(-2 sigma_q^2 x^2).
  const double fwhm_x = 2.0 * std::sqrt(std::log(2.0) / 2.0) / sigma_q;
  const double w_in = fwhm(0.5, 0.49, 0.50, 4001);    // centred at z = 0.495
  const double w_out = fwhm(1.2, 20.2, 20.8, 4001);   // centred at z = 20.5
  CHECK(w_in == doctest::Approx(fwhm_x * cfg.v_g / cfg.c).epsilon(0.03));
  CHECK(w_out == doctest::Approx(fwhm_x).epsilon(0.03));

  // Quadrature of the photon density over one box period equals 1 outside.
  const int n = 40001;
  double sum = 0.0;
  const double z_lo = 20.0, z_hi = 21.0;
  for (int i = 0; i < n; ++i) {
    const double z = z_lo + (z_hi - z_lo) * i / (n - 1);
    sum += single_photon_intensity(s, g, z, 1.2, cfg);
  }
  sum *= (z_hi - z_lo) / (n - 1);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));

  // Outside the medium the envelope is the input, delayed by L/v_g - L/c.
  const double t_late = 1.2;
  const double z_probe = 20.37;
  const double restored = single_photon_intensity(s, g, z_probe, t_late, cfg);
  const double x = z_probe + cfg.length * (cfg.c / cfg.v_g - 1.0) - cfg.c * t_late;
  CHECK(restored ==
        doctest::Approx(std::norm(envelope_at(s, g, x)) / cfg.length).epsilon(1e-12));

  CHECK_THROWS_AS(SinglePhotonState::gaussian(g, g.dq / 8.0, 0.0), validation_error);
}

TEST_CASE("two-photon wavefunction limits") {
  const ModeGrid g = ModeGrid::canonical(1.0, 401);

  SUBCASE("theta = 0 leaves the product state everywhere") {
    const QuantumConfig cfg = desk_config(g, 0.0);
    const SinglePhotonState s1 = SinglePhotonState::gaussian(g, g.dq / 12.0, -0.3);
    const SinglePhotonState s2 = SinglePhotonState::gaussian(g, g.dq / 12.0, -0.7);
    const double t = cfg.length / cfg.v_g;
    const double shift = cfg.length * (cfg.c / cfg.v_g - 1.0) - cfg.c * t;
    for (const auto& [z, zp] : std::vector<std::pair<double, double>>{
             {0.3, 0.31}, {0.3, 0.7}, {0.1, 0.95}}) {
      const cplx psi = two_photon_equal_time(s1, s2, g, 0.0, z, zp, t, cfg);
      const cplx product =
          envelope_at(s1, g, z + shift) * envelope_at(s2, g, zp + shift);
      CHECK(psi == product);
    }
  }

  SUBCASE("well-separated photons emerge unchanged") {
    const QuantumConfig cfg = desk_config(g, kPi);
    const double sep = 60.0 * 2.0 / g.dq;  // 120 / dq
    const SinglePhotonState s1 =
        SinglePhotonState::gaussian(g, g.dq / 12.0, -0.5 - 0.5 * sep);
    const SinglePhotonState s2 =
        SinglePhotonState::gaussian(g, g.dq / 12.0, -0.5 + 0.5 * sep);
    const double t = cfg.length / cfg.v_g;
    const double shift = cfg.length * (cfg.c / cfg.v_g - 1.0) - cfg.c * t;
    // Detect each photon at its own packet centre.
    const double z = 0.5 - 0.5 * sep, zp = 0.5 + 0.5 * sep;
    const cplx psi = two_photon_equal_time(s1, s2, g, kPi, z, zp, t, cfg);
    const cplx product =
        envelope_at(s1, g, z + shift) * envelope_at(s2, g, zp + shift);
    CHECK(std::abs(psi - product) < 1e-6 * std::abs(product));
  }

  SUBCASE("overlapping narrowband photons pick up the conditional phase") {
    const QuantumConfig cfg = desk_config(g, 1.1);
    const double sigma_q = 5e-4 * g.dq;
    const SinglePhotonState s1 = SinglePhotonState::gaussian(g, sigma_q, -0.5);
    const SinglePhotonState s2 = SinglePhotonState::gaussian(g, sigma_q, -0.5);
    const double t = cfg.length / cfg.v_g;
    const double shift = cfg.length * (cfg.c / cfg.v_g - 1.0) - cfg.c * t;
    const double z = 0.5, zp = 0.5 + 0.005 / g.dq;
    const cplx psi = two_photon_equal_time(s1, s2, g, 1.1, z, zp, t, cfg);
    const cplx target = std::exp(cplx{0.0, 1.1}) * envelope_at(s1, g, z + shift) *
                        envelope_at(s2, g, zp + shift);
    CHECK(std::abs(psi - target) < 1e-3 * std::abs(target));
  }

  SUBCASE("conditional phase decays monotonically with separation") {
    const QuantumConfig cfg = desk_config(g, kPi / 2.0);
    const double sigma_q = 5e-4 * g.dq;
    const SinglePhotonState s1 = SinglePhotonState::gaussian(g, sigma_q, -0.5);
    const SinglePhotonState s2 = SinglePhotonState::gaussian(g, sigma_q, -0.5);
    const double t = cfg.length / cfg.v_g;
    const double shift = cfg.length * (cfg.c / cfg.v_g - 1.0) - cfg.c * t;
    double prev = kPi / 2.0 + 1e-9;
    for (int i = 0; i < 40; ++i) {
      const double w = (2.0 * kPi / g.dq) * 0.99 * i / 39.0;
      const cplx psi =
          two_photon_equal_time(s1, s2, g, kPi / 2.0, 0.5 - 0.5 * w, 0.5 + 0.5 * w, t, cfg);
      const cplx product = envelope_at(s1, g, 0.5 - 0.5 * w + shift) *
                           envelope_at(s2, g, 0.5 + 0.5 * w + shift);
      const double phase = std::arg(psi / product);
      CHECK(phase < prev);
      CHECK(phase >= -1e-12);
      prev = phase;
    }
    CHECK(std::arg(two_photon_equal_time(s1, s2, g, kPi / 2.0, 0.5, 0.5, t, cfg) /
                   (envelope_at(s1, g, 0.5 + shift) * envelope_at(s2, g, 0.5 + shift))) ==
          doctest::Approx(kPi / 2.0).epsilon(1e-3));
  }

  SUBCASE("general-time variant matches the equal-time one at t = t'") {
    const QuantumConfig cfg = desk_config(g, 0.8);
    const SinglePhotonState s1 = SinglePhotonState::gaussian(g, g.dq / 12.0, -0.4);
    const SinglePhotonState s2 = SinglePhotonState::gaussian(g, g.dq / 12.0, -0.6);
    const double t = 1.3;
    // Probe at the packet centres: the envelope argument z + 99 - 130 peaks
    // at the state centres -0.4 and -0.6.
    const cplx a = two_photon_equal_time(s1, s2, g, 0.8, 30.6, 30.4, t, cfg);
    const cplx b = two_photon_general(s1, s2, g, 0.8, 30.6, t, 30.4, t, cfg);
    CHECK(std::abs(a - b) < 1e-9 * std::abs(a));
  }
}

TEST_CASE("state amplitudes: translation invariance and mode-sum oracle") {
  const ModeGrid g = ModeGrid::canonical(1.0, 401);
  const int nz = 1024;
  const SinglePhotonState s1 = SinglePhotonState::gaussian(g, g.dq / 14.0, -0.35);
  const SinglePhotonState s2 = SinglePhotonState::gaussian(g, g.dq / 14.0, -0.65);

  SUBCASE("free input: |xi| time-invariant, norm preserved to 1e-10") {
    const QuantumConfig cfg = desk_config(g, 0.0);
    for (const double t : {0.37, 1.0, 2.13}) {
      const auto psi = two_photon_matrix(s1, s2, g, 0.0, t, cfg, nz);
      const TwoPhotonAmplitudes xi = state_amplitudes(psi, nz, g);
      CHECK(std::abs(xi.norm_sq() - 1.0) < 1e-10);
      double worst = 0.0;
      for (int a = 0; a < g.m; ++a) {
        for (int b = 0; b < g.m; ++b) {
          worst = std::max(worst, std::abs(std::abs(xi.at(a, b)) -
                                           std::abs(s1.xi[a] * s2.xi[b])));
        }
      }
      CHECK(worst < 1e-10);
    }
  }

  SUBCASE("ideal narrowband kernel: global conditional phase e^{i theta}") {
    const double theta = 2.2;
    const QuantumConfig cfg = desk_config(g, theta);
    const double t_exit = cfg.length / cfg.v_g;
    const auto psi =
        two_photon_matrix(s1, s2, g, theta, t_exit, cfg, nz, Kernel::unit);
    const TwoPhotonAmplitudes xi = state_amplitudes(psi, nz, g);
    CHECK(std::abs(xi.norm_sq() - 1.0) < 1e-10);
    const cplx phase = std::exp(cplx{0.0, theta});
    double worst = 0.0;
    for (int a = 0; a < g.m; ++a) {
      for (int b = 0; b < g.m; ++b) {
        worst = std::max(worst, std::abs(xi.at(a, b) - phase * s1.xi[a] * s2.xi[b]));
      }
    }
    CHECK(worst < 1e-9);
  }

  SUBCASE("exact kernel against the discrete convolution formula") {
    // With the Dirichlet kernel the transform must equal
    //   xi_1^q xi_2^q' + (e^{i theta} - 1) S_{q+q'} / M
    // at the exit time where all translation phases are unity.
    const double theta = 1.3;
    const QuantumConfig cfg = desk_config(g, theta);
    const double t_exit = cfg.length / cfg.v_g;
    const auto psi =
        two_photon_matrix(s1, s2, g, theta, t_exit, cfg, nz, Kernel::dirichlet);
    const TwoPhotonAmplitudes xi = state_amplitudes(psi, nz, g);

    std::vector<cplx> conv(2 * g.m - 1, cplx{0.0, 0.0});
    for (int p = 0; p < g.m; ++p) {
      for (int r = 0; r < g.m; ++r) {
        conv[p + r] += s1.xi[p] * s2.xi[r];
      }
    }
    const cplx phase = std::exp(cplx{0.0, theta}) - 1.0;
    double worst = 0.0;
    for (int a = 0; a < g.m; ++a) {
      for (int b = 0; b < g.m; ++b) {
        const cplx expect = s1.xi[a] * s2.xi[b] + phase * conv[a + b] / double(g.m);
        worst = std::max(worst, std::abs(xi.at(a, b) - expect));
      }
    }
    CHECK(worst < 1e-9);
  }

  SUBCASE("coarse grids are rejected") {
    const QuantumConfig cfg = desk_config(g, 0.0);
    const auto psi = two_photon_matrix(s1, s2, g, 0.0, 1.0, cfg, 512);
    CHECK_THROWS_AS(state_amplitudes(psi, 512, g), validation_error);
  }
}

TEST_CASE("cphase metrics") {
  const ModeGrid g = ModeGrid::canonical(1.0, 401);

  SUBCASE("overlapping narrowband photons at theta = pi") {
    const QuantumConfig cfg = desk_config(g, kPi);
    const SinglePhotonState s1 = SinglePhotonState::gaussian(g, 5e-4 * g.dq, -0.5);
    const SinglePhotonState s2 = SinglePhotonState::gaussian(g, 5e-4 * g.dq, -0.5);
    const CphaseMetrics m = cphase_metrics(s1, s2, g, cfg, 1024);
    CHECK(m.theta == doctest::Approx(kPi).epsilon(1e-12));
    INFO("fidelity = ", m.fidelity, ", norm = ", m.norm_out);
    CHECK(m.fidelity >= 0.99);
  }

  SUBCASE("fully separated photons keep fidelity to the input") {
    const QuantumConfig cfg = desk_config(g, kPi);
    const double sep = 60.0 / g.dq;
    const SinglePhotonState s1 =
        SinglePhotonState::gaussian(g, g.dq / 12.0, -0.5 - 0.5 * sep);
    const SinglePhotonState s2 =
        SinglePhotonState::gaussian(g, g.dq / 12.0, -0.5 + 0.5 * sep);
    const CphaseMetrics m = cphase_metrics(s1, s2, g, cfg, 1024);
    INFO("fidelity = ", m.fidelity);
    CHECK(m.fidelity >= 0.99);
    CHECK(std::abs(m.norm_out - 1.0) < 1e-3);
  }

  SUBCASE("pi-condition is a strict inequality") {
    QuantumConfig cfg = desk_config(g, kPi);
    // Make the two sides of the inequality exactly equal.
    const double lhs = std::pow(cfg.dq * cfg.length / (2.0 * kPi), 2);
    cfg.v_g = 1.0;
    cfg.c = 1.0;
    cfg.g2 = 1.0;
    cfg.rabi_sq = lhs;
    const SinglePhotonState s1 = SinglePhotonState::gaussian(g, g.dq / 12.0, -0.5);
    const CphaseMetrics m = cphase_metrics(s1, s1, g, cfg, 1024);
    CHECK_FALSE(m.pi_condition);
    QuantumConfig above = cfg;
    above.rabi_sq = lhs * 0.99;
    CHECK(cphase_metrics(s1, s1, g, above, 1024).pi_condition);
  }
}

TEST_CASE("cross-phase angles follow the drive and Zeeman detunings") {
  const ModeGrid g = ModeGrid::canonical(2.0, 201);
  QuantumConfig cfg;
  cfg.length = 2.0;
  cfg.v_g = 3.0;
  cfg.c = 50.0;
  cfg.g2 = 4.0;
  cfg.rabi_sq = 2.0;
  cfg.delta = 0.2;
  cfg.delta_d = 1.1;
  cfg.dq = g.dq;
  const double eta = 4.0 / (3.0 * 2.0);
  CHECK(cfg.eta() == doctest::Approx(eta).epsilon(1e-15));
  const XpmAngles a = XpmAngles::at(cfg, 0.7);
  const double base = eta * cfg.length * cfg.dq / (2.0 * kPi);
  CHECK(a.theta1 == doctest::Approx(base * (1.1 + 0.2) * 0.7).epsilon(1e-12));
  CHECK(a.theta2 == doctest::Approx(base * (1.1 - 0.2) * 0.7).epsilon(1e-12));
  CHECK(a.theta == doctest::Approx(base * 1.1 * cfg.length).epsilon(1e-12));
  const XpmAngles c = XpmAngles::common(0.4);
  CHECK(c.theta1 == 0.4);
  CHECK(c.theta2 == 0.4);
  CHECK(c.theta == 0.4);
}
