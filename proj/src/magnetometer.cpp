#include "tripod/magnetometer.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "tripod/constants.hpp"
#include "tripod/errors.hpp"
#include "tripod/linear_response.hpp"

namespace tripod {

namespace {

struct Context {
  MediumParams p;
  DriveZeemanConfig z;
  DerivedParams d;
  double t_m = 0.0;
  double n_in = 0.0;
  double g2_intensity = 0.0;  // g^2 I(0) per circular component, (rad/s)^2
};

Context make_context(const MagnetometerConfig& cfg) {
  cfg.validate();
  Context c;
  c.p = cfg.medium;
  c.z = DriveZeemanConfig::collinear(cfg.omega_rabi, cfg.b_field, cfg.medium,
                                     cfg.m_f_prime);
  c.d = derive(cfg.medium, cfg.dipole, cfg.a0, c.z);
  c.t_m = cfg.t_m;
  c.n_in = cfg.detector_efficiency * cfg.p_in * cfg.t_m /
           (constants::hbar * cfg.medium.omega_p);
  // n_in = 2 I(0) c t_m / L with I(0) split evenly between the components.
  const double i0 = c.n_in * cfg.medium.length / (2.0 * constants::c_light * cfg.t_m);
  c.g2_intensity = c.d.g_coupling * c.d.g_coupling * 0.5 * i0;
  return c;
}

double kappa_sym_l(const Context& c) {
  const PropagationCoeffs pc = coefficients(c.p, c.d, c.z);
  return 0.5 * (pc.kappa1 + pc.kappa2) * c.p.length;
}

double rotation_at_exit(const Context& c) {
  const PropagationCoeffs pc = coefficients(c.p, c.d, c.z);
  return rotation_small_absorption(pc, c.z, c.p.length, 2.0 * c.g2_intensity);
}

double signal_impl(const Context& c) {
  const double phi = rotation_at_exit(c);
  return 2.0 * c.n_in * std::exp(-2.0 * kappa_sym_l(c)) * std::sin(phi) * std::cos(phi);
}

std::pair<double, double> noise_impl(const Context& c) {
  const double rabi_sq = std::norm(c.z.omega_rabi);
  const double g = c.p.gamma;
  double n_at;
  if (std::abs(c.z.delta) < c.p.gamma_c || c.z.delta == 0.0) {
    n_at = c.d.a0 * g * g * c.p.gamma_c * c.p.gamma_c * c.p.area * c.n_in /
           (32.0 * std::numbers::pi * rabi_sq * rabi_sq * c.p.length);
  } else {
    // Outside the small-field window, take the excited population from the
    // steady-state coherences: sigma_33 = |sigma_13|^2 + |sigma_23|^2. This
    // reduces to the closed form above as Delta -> 0.
    const double r1 = std::norm(steady_state_coherence(
        -c.z.delta, c.z.delta_d, c.z.omega_rabi, g, c.p.gamma_c));
    const double r2 = std::norm(steady_state_coherence(
        c.z.delta, c.z.delta_d, c.z.omega_rabi, g, c.p.gamma_c));
    const double sigma33 = (r1 + r2) * c.g2_intensity;
    n_at = g * sigma33 * c.d.n_atoms * c.t_m * c.p.area /
           (4.0 * std::numbers::pi * c.p.length * c.p.length);
  }
  const double n_shot =
      std::sqrt((1.0 + std::exp(-2.0 * kappa_sym_l(c))) * c.n_in / 2.0);
  return {n_at, n_shot};
}

double b_min_closed_impl(const Context& c) {
  const double rabi_sq = std::norm(c.z.omega_rabi);
  return 2.0 * constants::hbar * rabi_sq /
         (std::abs(c.p.g_f) * constants::mu_bohr * c.d.a0 * c.p.length * c.p.gamma *
          std::sqrt(c.n_in));
}

}  // namespace

void MagnetometerConfig::validate() const {
  medium.validate();
  if (!(p_in > 0.0)) throw validation_error("MagnetometerConfig: p_in must be > 0");
  if (!(t_m > 0.0)) throw validation_error("MagnetometerConfig: t_m must be > 0");
  if (!(detector_efficiency > 0.0 && detector_efficiency <= 1.0)) {
    throw validation_error("MagnetometerConfig: detector_efficiency must be in (0, 1]");
  }
  if (medium.g_f == 0.0) {
    throw validation_error("MagnetometerConfig: g_f must be nonzero");
  }
}

double signal(const MagnetometerConfig& cfg) { return signal_impl(make_context(cfg)); }

std::pair<double, double> noise(const MagnetometerConfig& cfg) {
  return noise_impl(make_context(cfg));
}

double b_min(const MagnetometerConfig& cfg) {
  return b_min_closed_impl(make_context(cfg));
}

MagnetometerResult analyze(const MagnetometerConfig& cfg) {
  const Context c = make_context(cfg);
  MagnetometerResult r;
  r.n_in = c.n_in;
  r.signal = signal_impl(c);
  std::tie(r.noise_atomic, r.noise_shot) = noise_impl(c);
  r.b_min_closed = b_min_closed_impl(c);
  r.kappa_l = kappa_sym_l(c);
  r.phi = rotation_at_exit(c);
  {
    const PropagationCoeffs pc = coefficients(c.p, c.d, c.z);
    r.phi_cubic = rotation_cubic_term(pc, c.z, c.p.length);
  }
  r.bandwidth = c.d.eit_bandwidth;
  r.delta = c.z.delta;
  r.ellipticity_deviation =
      cw_solution(c.p, c.d, c.z, c.p.length, 0.0, 0.0).ellipticity_deviation;

  // Field at which |signal| equals the total noise, from the full nonlinear
  // signal. The signal grows from zero while the noise sits at the shot
  // floor, so a geometric bisection around the closed form brackets the root.
  auto excess = [&cfg](double b) {
    MagnetometerConfig probe = cfg;
    probe.b_field = b;
    const Context cb = make_context(probe);
    const auto [na, ns] = noise_impl(cb);
    return std::abs(signal_impl(cb)) - (na + ns);
  };
  double lo = r.b_min_closed * 1e-3, hi = r.b_min_closed * 1e3;
  if (excess(lo) < 0.0 && excess(hi) > 0.0) {
    for (int it = 0; it < 200; ++it) {
      const double mid = std::sqrt(lo * hi);
      (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    r.b_min_root = std::sqrt(lo * hi);
  } else {
    r.b_min_root = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

std::vector<SweepRow> sensitivity_sweep(const MagnetometerConfig& cfg,
                                        const std::string& axis,
                                        const std::vector<double>& values,
                                        int threads) {
  auto with_axis = [&](double v) {
    MagnetometerConfig c = cfg;
    if (axis == "omega_rabi") {
      c.omega_rabi = v;
    } else if (axis == "density") {
      // a0 scales linearly with density at fixed dipole moment.
      if (c.a0) *c.a0 *= v / cfg.medium.density;
      c.medium.density = v;
    } else if (axis == "length") {
      c.medium.length = v;
    } else if (axis == "power") {
      c.p_in = v;
    } else if (axis == "t_m") {
      c.t_m = v;
    } else if (axis == "b_field") {
      c.b_field = v;
    } else {
      throw validation_error("sensitivity_sweep: unknown axis '" + axis + "'");
    }
    return c;
  };

  std::vector<SweepRow> rows(values.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const MagnetometerConfig c = with_axis(values[i]);
      rows[i].axis_value = values[i];
      rows[i].result = analyze(c);
      const Context ctx = make_context(c);
      rows[i].regime = validate_regime(ctx.p, ctx.d, ctx.z,
                                       std::sqrt(2.0 * ctx.g2_intensity), c.t_m);
    }
  };
  const int nthreads = std::max(1, threads);
  if (nthreads == 1 || values.size() < 2) {
    work(0, values.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (values.size() + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min(values.size(), b + chunk);
      if (b >= e) break;
      pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  return rows;
}

}  // namespace tripod
