#include <doctest.h>

#include <cmath>
#include <complex>

#include "tripod/errors.hpp"
#include "tripod/linear_response.hpp"
#include "tripod/mb_solver.hpp"

using namespace tripod;

namespace {

using cplx = std::complex<double>;

// Gamma-unit solver config (gamma = 1 rad/s, lengths in cm).
MbConfig gamma_units_config(double a0l, double rabi, double zeeman, double delta_d,
                            double gamma_c) {
  MbConfig c;
  c.gamma = 1.0;
  c.gamma_c = gamma_c;
  c.delta = 0.0;
  c.zeeman = zeeman;
  c.delta_d = delta_d;
  c.omega_rabi = rabi;
  c.length = 1.0;
  c.a0 = a0l;
  return c;
}

// March a single atom to steady state under fixed fields.
AtomicState settle(const MbConfig& cfg, cplx u1, cplx u2, double t_end, double dt) {
  AtomicState s = AtomicState::ground_half();
  const int steps = static_cast<int>(t_end / dt);
  for (int i = 0; i < steps; ++i) s = evolve_atom(s, u1, u2, cfg, dt);
  return s;
}

}  // namespace

TEST_CASE("ground manifold with idle probe is a fixed point") {
  MbConfig cfg = gamma_units_config(10.0, 0.7, 0.0, 0.1, 0.02);
  const AtomicState s0 = AtomicState::ground_half();
  const AtomicState s1 = evolve_atom(s0, 0.0, 0.0, cfg, 0.05);
  CHECK(s1.p1 == 0.5);
  CHECK(s1.p2 == 0.5);
  CHECK(std::abs(s1.s13) == 0.0);
  CHECK(std::abs(s1.s14) == 0.0);
  CHECK(s1.p3 == 0.0);
  CHECK(s1.p4 == 0.0);
}

TEST_CASE("evolve_atom enforces the step-size guard") {
  MbConfig cfg = gamma_units_config(10.0, 1.0, 0.0, 0.0, 0.0);
  CHECK_THROWS_AS(evolve_atom(AtomicState::ground_half(), 0.0, 0.0, cfg, 0.1),
                  validation_error);
}

TEST_CASE("long-time coherence matches the weak-probe closed form") {
  MbConfig cfg = gamma_units_config(10.0, 0.9, 0.1, -0.15, 0.01);
  cfg.delta = 0.3;  // probe carrier detuning; delta_1 = 0.2
  const cplx u1 = 1e-5 * 0.9;
  const AtomicState s = settle(cfg, u1, 0.0, 2000.0, 0.02);
  const cplx expected =
      u1 * steady_state_coherence(cfg.delta1(), cfg.delta_d, cfg.omega_rabi, cfg.gamma,
                                  cfg.gamma_c);
  CHECK(std::abs(s.s13 - expected) / std::abs(expected) < 1e-6);
  // Companion coherences stay off for a single-component probe.
  CHECK(std::abs(s.s23) < 1e-20);
  CHECK(std::abs(s.s12) < 1e-20);
}

TEST_CASE("adiabatic turn-on rotates the dark state") {
  // gamma_c = 0 at two-photon resonance: sigma_13 -> 0 and
  // sigma_14 -> -g E_1 / (2 Omega_d).
  MbConfig cfg = gamma_units_config(10.0, 1.0, 0.0, 0.0, 0.0);
  AtomicState s = AtomicState::ground_half();
  const double dt = 0.02, t_end = 800.0, t0 = 400.0, ramp = 100.0;
  const double peak = 1e-3;
  double t = 0.0;
  while (t < t_end) {
    const double u = peak * 0.5 * (1.0 + std::tanh((t - t0) / ramp));
    s = evolve_atom(s, u, 0.0, cfg, dt);
    t += dt;
  }
  const double u_end = peak * 0.5 * (1.0 + std::tanh((t_end - t0) / ramp));
  CHECK(std::abs(s.s13) < 1e-8);
  const cplx dark = -u_end / (2.0 * cfg.omega_rabi);
  CHECK(std::abs(s.s14 - dark) / std::abs(dark) < 1e-4);
  CHECK(s.positivity_ok(1e-12));
}

TEST_CASE("vacuum run reproduces the input exactly (delay L/c)") {
  MbConfig cfg = gamma_units_config(0.0, 1.0, 0.0, 0.0, 0.0);
  PulseSpec p1{PulseSpec::Shape::gaussian, 0.01, 1.0, 2.0};
  PulseSpec p2{PulseSpec::Shape::sech, 0.02, 1.5, 2.5};
  GridSpec grid{16, 128, 5.0};
  const SpaceTimeField f = propagate(p1, p2, cfg, grid);
  for (int k = 0; k < f.nt_full; ++k) {
    CHECK(f.out1[k] == f.in1[k]);
    CHECK(f.out2[k] == f.in2[k]);
  }
  const MbAnalysis a = analyze_output(f, cfg, p1, p2);
  // In the co-moving frame the measured lab delay is exactly L/c.
  CHECK(a.delay_measured == doctest::Approx(cfg.length / 2.99792458e10).epsilon(1e-12));
}

TEST_CASE("lossless photon flux is conserved through the medium") {
  MbConfig cfg = gamma_units_config(10.0, 1.0, 0.0, 0.0, 0.0);
  PulseSpec pulse{PulseSpec::Shape::gaussian, 0.01, 300.0, 420.0};
  GridSpec grid{300, 10501, 1000.0};
  const SpaceTimeField f = propagate(pulse, pulse, cfg, grid);
  double ein = 0.0, eout = 0.0;
  for (int k = 0; k < f.nt_full; ++k) {
    ein += std::norm(f.in1[k]);
    eout += std::norm(f.out1[k]);
  }
  CHECK(std::abs(eout - ein) / ein < 1e-3);
}

TEST_CASE("weak adiabatic pulse: delay, envelope and rotation match the theory") {
  MbConfig cfg = gamma_units_config(10.0, 1.0, 0.05, 0.0, 0.0);
  PulseSpec pulse{PulseSpec::Shape::gaussian, 0.01, 300.0, 420.0};
  GridSpec grid{300, 10501, 1000.0};
  const SpaceTimeField f = propagate(pulse, pulse, cfg, grid);
  const MbAnalysis a = analyze_output(f, cfg, pulse, pulse);

  INFO("delay: ", a.delay_measured, " vs ", a.delay_expected);
  CHECK(a.delay_rel_err < 0.05);
  INFO("l2: ", a.l2_err_1, " ", a.l2_err_2);
  CHECK(a.l2_err_1 < 0.02);
  CHECK(a.l2_err_2 < 0.02);
  INFO("phase: ", a.phase_diff_measured, " vs ", a.phase_diff_expected);
  CHECK(a.phase_abs_err < 0.03 * std::abs(a.phase_diff_expected));
  // 2 Phi(L) = 2 Delta L (1 + Delta^2/|Omega|^2) / v_g up to 1/c corrections.
  CHECK(a.phase_diff_expected == doctest::Approx(0.2506).epsilon(1e-3));
}

TEST_CASE("strong probe outside the analytic regime still integrates cleanly") {
  MbConfig cfg = gamma_units_config(5.0, 1.0, 0.02, 0.0, 1e-3);
  PulseSpec pulse{PulseSpec::Shape::gaussian, 0.8, 50.0, 100.0};
  GridSpec grid{200, 4001, 250.0};
  const SpaceTimeField f = propagate(pulse, pulse, cfg, grid);
  double peak_out = 0.0;
  for (const auto& v : f.out1) peak_out = std::max(peak_out, std::abs(v));
  CHECK(peak_out > 0.0);
  CHECK(std::isfinite(peak_out));
}

TEST_CASE("interior record honours strides and the memory cap") {
  MbConfig cfg = gamma_units_config(2.0, 1.0, 0.0, 0.0, 0.0);
  PulseSpec pulse{PulseSpec::Shape::gaussian, 0.01, 20.0, 40.0};

  RecordPolicy strided;
  strided.mode = RecordPolicy::Mode::strided;
  strided.z_stride = 10;
  strided.t_stride = 8;
  GridSpec grid{100, 1101, 100.0};
  const SpaceTimeField f = propagate(pulse, pulse, cfg, grid, strided);
  CHECK(f.nz == 11);
  CHECK(f.nt == 138);
  CHECK(f.e1.size() == static_cast<std::size_t>(11) * 138);
  // Recorded plane 0 is the input boundary.
  for (int k = 0; k + 1 < f.nt; ++k) {
    CHECK(f.at1(0, k) == f.in1[k * 8]);
  }

  RecordPolicy full;
  full.mode = RecordPolicy::Mode::full;
  full.memory_cap = 1000;
  try {
    propagate(pulse, pulse, cfg, grid, full);
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("101") != std::string::npos);
    CHECK(msg.find("1101") != std::string::npos);
    CHECK(msg.find("1000") != std::string::npos);
  }
}

TEST_CASE("propagate rejects an unstable time step") {
  MbConfig cfg = gamma_units_config(2.0, 1.0, 0.0, 0.0, 0.0);
  PulseSpec pulse{PulseSpec::Shape::gaussian, 0.01, 20.0, 40.0};
  GridSpec grid{100, 100, 100.0};  // dt * gamma ~ 1
  CHECK_THROWS_AS(propagate(pulse, pulse, cfg, grid), validation_error);
}

TEST_CASE("pulse shapes: peak at centre, flat-top plateau, FWHM convention") {
  PulseSpec g{PulseSpec::Shape::gaussian, 2.0, 10.0, 50.0};
  CHECK(g(50.0) == 2.0);
  CHECK(g(45.0) == doctest::Approx(1.0).epsilon(1e-12));  // duration = FWHM

  PulseSpec s{PulseSpec::Shape::sech, 2.0, 10.0, 50.0};
  CHECK(s(50.0) == 2.0);
  CHECK(s(45.0) == doctest::Approx(1.0).epsilon(1e-12));

  PulseSpec f{PulseSpec::Shape::flat_top, 2.0, 10.0, 50.0};
  CHECK(f(50.0) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(f(45.0) == doctest::Approx(1.0).epsilon(1e-4));  // half height at the edge
  CHECK(f(55.0) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(f(52.0) == doctest::Approx(2.0).epsilon(5e-3));  // plateau
  CHECK(f(70.0) < 1e-8);

  PulseSpec bad{PulseSpec::Shape::gaussian, 1.0, 0.0, 0.0};
  CHECK_THROWS_AS(bad.validate(), validation_error);
}
