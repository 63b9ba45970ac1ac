// tripodsim: command-line driver for the tripod-atom EIT medium simulator.
//
// Subcommands: spectra | mb | magnetometer | quantum. Each reads a JSON
// parameter file, writes CSV/JSON tables plus a sidecar of the resolved
// parameters, and is bitwise reproducible for identical configs.

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "tripod/config.hpp"
#include "tripod/constants.hpp"
#include "tripod/errors.hpp"
#include "tripod/io.hpp"
#include "tripod/linear_response.hpp"
#include "tripod/magnetometer.hpp"
#include "tripod/mb_solver.hpp"
#include "tripod/params.hpp"
#include "tripod/propagation.hpp"
#include "tripod/quantum_xpm.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tripod;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir = "out";
  std::string format = "csv";
  bool strict = false;
  bool verbose = false;
  int threads = 1;
};

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitRegimeGate = 4;

std::string one_line(const json& j) { return j.dump(); }

// Table writer honouring --format. CSV keeps 12 significant digits with LF
// endings; JSON mirrors the same provenance, columns and rows.
void write_table(const fs::path& base, const std::string& command,
                 const ProjectConfig& cfg, const std::vector<std::string>& notes,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows,
                 const std::string& format) {
  if (format == "csv") {
    CsvWriter w(base.string() + ".csv");
    w.comment("tripodsim " + command);
    w.comment("seed: " + std::to_string(cfg.seed));
    w.comment("params: " + one_line(cfg.resolved()));
    for (const auto& n : notes) w.comment(n);
    w.header(columns);
    for (const auto& r : rows) w.row(r);
  } else {
    json j;
    j["command"] = command;
    j["seed"] = cfg.seed;
    j["params"] = cfg.resolved();
    j["notes"] = notes;
    j["columns"] = columns;
    j["rows"] = rows;
    std::ofstream out(base.string() + ".json", std::ios::binary);
    out << j.dump(2) << "\n";
  }
}

void write_sidecar(const fs::path& path, const std::string& command,
                   const ProjectConfig& cfg, const json& extra = json::object()) {
  json j;
  j["command"] = command;
  j["seed"] = cfg.seed;
  j["params"] = cfg.resolved();
  for (const auto& [k, v] : extra.items()) j[k] = v;
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << "\n";
}

json regime_to_json(const RegimeReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["margin"] = std::isinf(c.margin) ? json("inf") : json(c.margin);
    e["detail"] = c.detail;
    checks.push_back(e);
  }
  json j;
  j["checks"] = checks;
  j["all_pass"] = rep.all_pass();
  return j;
}

int cmd_spectra(const Options& opt, const ProjectConfig& cfg) {
  const DriveZeemanConfig z = cfg.drive_config();
  const DerivedParams d = derive(cfg.medium, cfg.dipole, cfg.a0, z);

  SpectraSection sec;
  sec.delta_min = -2.0 * cfg.medium.gamma;
  sec.delta_max = 2.0 * cfg.medium.gamma;
  if (cfg.spectra) sec = *cfg.spectra;

  std::vector<double> grid(sec.points);
  for (int i = 0; i < sec.points; ++i) {
    grid[i] = sec.delta_min + (sec.delta_max - sec.delta_min) * i / (sec.points - 1);
  }
  const ComplexResponse r = spectra(cfg.medium, d, z, grid);

  std::vector<std::vector<double>> rows;
  rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    rows.push_back({grid[i] / cfg.medium.gamma, r.chi1[i].imag(), r.chi1[i].real(),
                    r.chi2[i].imag(), r.chi2[i].real()});
  }
  write_table(fs::path(opt.out_dir) / "spectra", "spectra", cfg, {},
              {"delta_over_gamma", "abs1", "disp1", "abs2", "disp2"}, rows, opt.format);
  write_sidecar(fs::path(opt.out_dir) / "spectra_params.json", "spectra", cfg);
  return kExitOk;
}

int cmd_mb(const Options& opt, const ProjectConfig& cfg) {
  if (!cfg.mb) throw validation_error("config: /mb section required for the mb command");
  const MbSection& sec = *cfg.mb;
  const DriveZeemanConfig z = cfg.drive_config();
  const DerivedParams d = derive(cfg.medium, cfg.dipole, cfg.a0, z);

  MbConfig mb = MbConfig::from(cfg.medium, d, z);
  if (sec.vacuum) mb.a0 = 0.0;

  const double probe_peak = std::max(sec.pulse1.peak_rabi, sec.pulse2.peak_rabi);
  const double t_p = std::min(sec.pulse1.duration, sec.pulse2.duration);
  const RegimeReport regime =
      validate_regime(cfg.medium, d, z, probe_peak, t_p);
  if (opt.strict && !sec.vacuum && !regime.all_pass()) {
    write_sidecar(fs::path(opt.out_dir) / "mb_report.json", "mb", cfg,
                  {{"regime", regime_to_json(regime)}, {"aborted", true}});
    std::cerr << "mb: regime gate failed under --strict\n";
    return kExitRegimeGate;
  }

  GridSpec grid{sec.nz, sec.nt, sec.t_window};
  const SpaceTimeField f = propagate(sec.pulse1, sec.pulse2, mb, grid, sec.record);

  std::vector<std::vector<double>> rows;
  rows.reserve(f.nt_full);
  for (int k = 0; k < f.nt_full; ++k) {
    rows.push_back({k * f.dt_full, f.in1[k].real(), f.in1[k].imag(), f.in2[k].real(),
                    f.in2[k].imag(), f.out1[k].real(), f.out1[k].imag(),
                    f.out2[k].real(), f.out2[k].imag()});
  }
  write_table(fs::path(opt.out_dir) / "mb_envelopes", "mb", cfg, {},
              {"tau_s", "in1_re", "in1_im", "in2_re", "in2_im", "out1_re", "out1_im",
               "out2_re", "out2_im"},
              rows, opt.format);

  if (sec.record.mode != RecordPolicy::Mode::boundaries) {
    dump_field_binary(f, fs::path(opt.out_dir) / "mb_field.bin");
  }

  json extra;
  extra["regime"] = regime_to_json(regime);
  if (!sec.vacuum) {
    const MbAnalysis a = analyze_output(f, mb, sec.pulse1, sec.pulse2);
    json cmp;
    cmp["delay_expected_s"] = a.delay_expected;
    cmp["delay_measured_s"] = a.delay_measured;
    cmp["delay_rel_err"] = a.delay_rel_err;
    cmp["delay_ok"] = a.delay_rel_err < 0.05;
    cmp["l2_err_1"] = a.l2_err_1;
    cmp["l2_err_2"] = a.l2_err_2;
    cmp["l2_ok"] = a.l2_err_1 < 0.02 && a.l2_err_2 < 0.02;
    cmp["phase_diff_measured_rad"] = a.phase_diff_measured;
    cmp["phase_diff_expected_rad"] = a.phase_diff_expected;
    cmp["phase_ok"] =
        a.phase_abs_err < 0.03 * std::max(1e-300, std::abs(a.phase_diff_expected));
    extra["analytic_comparison"] = cmp;
  } else {
    extra["vacuum_delay_s"] = cfg.medium.length / constants::c_light;
  }
  write_sidecar(fs::path(opt.out_dir) / "mb_report.json", "mb", cfg, extra);
  return kExitOk;
}

int cmd_magnetometer(const Options& opt, const ProjectConfig& cfg) {
  if (!cfg.magnetometer) {
    throw validation_error("config: /magnetometer section required");
  }
  const MagSection& sec = *cfg.magnetometer;

  MagnetometerConfig mc;
  mc.medium = cfg.medium;
  mc.omega_rabi = cfg.omega_rabi;
  mc.m_f_prime = cfg.geometry == "collinear" ? cfg.m_f_prime : 1;
  mc.b_field = cfg.b_field;
  mc.p_in = sec.power;
  mc.t_m = sec.t_m;
  mc.detector_efficiency = sec.detector_efficiency;
  mc.dipole = cfg.dipole;
  mc.a0 = cfg.a0;

  const DriveZeemanConfig z =
      DriveZeemanConfig::collinear(mc.omega_rabi, mc.b_field, mc.medium, mc.m_f_prime);
  const DerivedParams d = derive(mc.medium, mc.dipole, mc.a0, z);
  const double i0 = mc.p_in * mc.t_m / (tripod::constants::hbar * mc.medium.omega_p) *
                    mc.medium.length / (2.0 * tripod::constants::c_light * mc.t_m);
  const double probe_rabi = d.g_coupling * std::sqrt(i0);
  const RegimeReport regime = validate_regime(mc.medium, d, z, probe_rabi, mc.t_m);
  if (opt.strict && !regime.all_pass()) {
    write_sidecar(fs::path(opt.out_dir) / "magnetometer_params.json", "magnetometer",
                  cfg, {{"regime", regime_to_json(regime)}, {"aborted", true}});
    std::cerr << "magnetometer: regime gate failed under --strict\n";
    return kExitRegimeGate;
  }

  std::vector<double> axis_values;
  std::string axis = "b_field";
  std::vector<SweepRow> rows;
  if (sec.sweep) {
    axis = sec.sweep->axis;
    axis_values.resize(sec.sweep->points);
    for (int i = 0; i < sec.sweep->points; ++i) {
      const double f = static_cast<double>(i) / (sec.sweep->points - 1);
      axis_values[i] = sec.sweep->log
                           ? sec.sweep->min * std::pow(sec.sweep->max / sec.sweep->min, f)
                           : sec.sweep->min + (sec.sweep->max - sec.sweep->min) * f;
    }
    rows = sensitivity_sweep(mc, axis, axis_values, opt.threads);
  } else {
    SweepRow row;
    row.axis_value = mc.b_field;
    row.result = analyze(mc);
    row.regime = regime;
    rows.push_back(row);
  }

  std::vector<std::string> columns = {
      "axis_value",  "b_min_gauss",        "b_min_root_gauss", "n_in",
      "n_at",        "n_shot",             "kappa_L",          "phi_rad",
      "phi_cubic_rad", "ellipticity_dev",  "bandwidth_rad_per_s"};
  for (const auto& c : rows.front().regime.checks) columns.push_back("margin_" + c.name);

  std::vector<std::vector<double>> table;
  for (const auto& r : rows) {
    std::vector<double> row = {r.axis_value,
                               r.result.b_min_closed,
                               r.result.b_min_root,
                               r.result.n_in,
                               r.result.noise_atomic,
                               r.result.noise_shot,
                               r.result.kappa_l,
                               r.result.phi,
                               r.result.phi_cubic,
                               r.result.ellipticity_deviation,
                               r.result.bandwidth};
    for (const auto& c : r.regime.checks) row.push_back(c.margin);
    table.push_back(std::move(row));
  }
  write_table(fs::path(opt.out_dir) / "magnetometer", "magnetometer (axis: " + axis + ")",
              cfg, {"axis: " + axis}, columns, table, opt.format);
  write_sidecar(fs::path(opt.out_dir) / "magnetometer_params.json", "magnetometer", cfg,
                {{"regime", regime_to_json(regime)}, {"axis", axis}});
  return kExitOk;
}

int cmd_quantum(const Options& opt, const ProjectConfig& cfg) {
  if (!cfg.quantum) throw validation_error("config: /quantum section required");
  const QuantumSection& sec = *cfg.quantum;
  const DriveZeemanConfig z = cfg.drive_config();
  const DerivedParams d = derive(cfg.medium, cfg.dipole, cfg.a0, z);

  const ModeGrid grid = ModeGrid::canonical(cfg.medium.length, sec.modes);
  QuantumConfig qc = QuantumConfig::from(cfg.medium, d, z);
  std::vector<std::string> notes;
  if (grid.dq > qc.dq) {
    notes.push_back("grid bandwidth " + format_sig12(grid.dq) +
                    " 1/cm exceeds the EIT-window bound " + format_sig12(qc.dq) +
                    " 1/cm; mode-space model study");
  }
  qc.dq = grid.dq;

  // Collapse/revival curve of the coherent-state expectation value.
  {
    const double sigma_q = sec.sigma_q_over_dq * grid.dq;
    const SinglePhotonState shape = SinglePhotonState::gaussian(grid, sigma_q, -0.5 * qc.length);
    CoherentAmplitudes alphas;
    alphas.a1.resize(grid.m);
    alphas.a2.resize(grid.m);
    std::complex<double> peak{0.0, 0.0};
    for (const auto& x : shape.xi) peak += x;
    const double scale = std::sqrt(sec.coherent_alpha_sq) / std::abs(peak);
    for (int i = 0; i < grid.m; ++i) {
      alphas.a1[i] = shape.xi[i] * scale;
      alphas.a2[i] = shape.xi[i] * scale;
    }
    // Evaluate at the packet peak: tau chosen so alpha(tau) is maximal.
    const double t_peak = qc.length / qc.v_g - 0.5 * qc.length / qc.c;
    const double tau = t_peak - qc.length / qc.v_g;
    const std::complex<double> a_peak = alphas.alpha1_at(tau, grid, qc.c);

    std::vector<std::vector<double>> rows;
    for (int i = 0; i < sec.revival_points; ++i) {
      const double theta = 2.0 * std::numbers::pi * i / (sec.revival_points - 1);
      const auto [e1, e2] = coherent_evolve(alphas, grid, XpmAngles::common(theta),
                                            qc.length, t_peak, qc);
      (void)e2;
      rows.push_back({theta, std::abs(e1) / std::abs(a_peak),
                      std::arg(e1 / a_peak),
                      std::norm(a_peak) * 2.0 * std::numbers::pi / (qc.length * grid.dq)});
    }
    write_table(fs::path(opt.out_dir) / "quantum_revival", "quantum", cfg, notes,
                {"theta_rad", "amp_factor", "phase_rad", "alpha_sq_per_mode"}, rows,
                opt.format);
  }

  // Two-photon fidelity map over (separation, theta), sinc vs Dirichlet kernel.
  {
    std::vector<std::vector<double>> rows;
    double worst_kernel_gap = 0.0;
    bool dumped = false;
    for (const double sep_dq : sec.separations_dq_units) {
      const double sep = sep_dq / grid.dq;
      for (const double theta : sec.thetas_rad) {
        const double sigma_q = sec.sigma_q_over_dq * grid.dq;
        const SinglePhotonState s1 = SinglePhotonState::gaussian(
            grid, sigma_q, -0.5 * qc.length - 0.5 * sep);
        const SinglePhotonState s2 = SinglePhotonState::gaussian(
            grid, sigma_q, -0.5 * qc.length + 0.5 * sep);
        const auto psi_sinc =
            two_photon_matrix_exit(s1, s2, grid, theta, qc, sec.nz, Kernel::sinc);
        const TwoPhotonAmplitudes xi_sinc = state_amplitudes(psi_sinc, sec.nz, grid);
        const double fid_sinc = mode_overlap_fidelity(s1, s2, xi_sinc, theta);
        const auto psi_dir =
            two_photon_matrix_exit(s1, s2, grid, theta, qc, sec.nz, Kernel::dirichlet);
        const TwoPhotonAmplitudes xi_dir = state_amplitudes(psi_dir, sec.nz, grid);
        const double fid_dir = mode_overlap_fidelity(s1, s2, xi_dir, theta);
        worst_kernel_gap = std::max(worst_kernel_gap, std::abs(fid_sinc - fid_dir));
        rows.push_back({sep_dq, theta, fid_sinc, fid_dir, xi_sinc.norm_sq()});

        if (!dumped) {
          json state;
          state["m"] = grid.m;
          state["length_cm"] = qc.length;
          state["theta_rad"] = theta;
          state["separation_dq_units"] = sep_dq;
          std::vector<double> interleaved;
          interleaved.reserve(2 * xi_sinc.xi.size());
          for (const auto& v : xi_sinc.xi) {
            interleaved.push_back(v.real());
            interleaved.push_back(v.imag());
          }
          state["xi_re_im"] = interleaved;
          write_sidecar(fs::path(opt.out_dir) / "quantum_state.json", "quantum", cfg,
                        {{"state", state}});
          dumped = true;
        }
      }
    }
    std::vector<std::string> fid_notes = notes;
    if (worst_kernel_gap > 1e-3) {
      fid_notes.push_back("sinc and Dirichlet kernels diverge by " +
                          format_sig12(worst_kernel_gap) +
                          "; both columns reported");
    }
    write_table(fs::path(opt.out_dir) / "quantum_fidelity", "quantum", cfg, fid_notes,
                {"separation_dq_units", "theta_rad", "fidelity_sinc",
                 "fidelity_dirichlet", "norm_sinc"},
                rows, opt.format);
  }
  write_sidecar(fs::path(opt.out_dir) / "quantum_params.json", "quantum", cfg,
                {{"theta_from_config", XpmAngles::at(qc, qc.length).theta},
                 {"pi_condition_lhs", std::pow(qc.dq * qc.length / (2.0 * std::numbers::pi), 2)},
                 {"pi_condition_rhs", qc.v_g * qc.rabi_sq / (qc.c * qc.g2)}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tripodsim: weak-probe propagation through a driven tripod-atom EIT medium"};
  app.require_subcommand(1);

  Options opt;
  std::vector<CLI::App*> subs;
  for (const char* name : {"spectra", "mb", "magnetometer", "quantum"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "JSON parameter file")->required();
    sub->add_option("--out", opt.out_dir, "output directory (default: out)");
    sub->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--strict", opt.strict, "fail (exit 4) when regime checks fail");
    sub->add_flag("-v,--verbose", opt.verbose, "progress notes on stderr");
    sub->add_option("--threads", opt.threads, "worker threads for sweeps")
        ->check(CLI::PositiveNumber);
    subs.push_back(sub);
  }
  app.get_subcommand("spectra")->description("steady-state absorption/dispersion spectra");
  app.get_subcommand("mb")->description("brute-force Maxwell-Bloch run with analytic comparison");
  app.get_subcommand("magnetometer")->description("balanced-polarimeter sensitivity analysis");
  app.get_subcommand("quantum")->description("coherent-state revival and two-photon CPHASE study");

  CLI11_PARSE(app, argc, argv);

  try {
    const ProjectConfig cfg = load_config(opt.config_path);
    if (opt.verbose) {
      std::cerr << "config: " << opt.config_path << "\nresolved: " << one_line(cfg.resolved())
                << "\n";
    }
    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);
    if (ec) throw validation_error("cannot create output directory '" + opt.out_dir + "'");

    if (subs[0]->parsed()) return cmd_spectra(opt, cfg);
    if (subs[1]->parsed()) return cmd_mb(opt, cfg);
    if (subs[2]->parsed()) return cmd_magnetometer(opt, cfg);
    if (subs[3]->parsed()) return cmd_quantum(opt, cfg);
    return kExitConfig;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const numeric_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
