#pragma once

// JSON parameter-file loading. Keys carry explicit unit suffixes
// (gamma_rad_per_s, length_cm, ...); unknown keys are rejected with the
// offending path so typos cannot silently change a run.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tripod/mb_solver.hpp"
#include "tripod/params.hpp"

namespace tripod {

struct SpectraSection {
  double delta_min = 0.0;  // rad/s
  double delta_max = 0.0;  // rad/s
  int points = 2001;
};

struct MbSection {
  bool vacuum = false;
  PulseSpec pulse1, pulse2;
  int nz = 0, nt = 0;
  double t_window = 0.0;  // s
  RecordPolicy record;
};

struct MagSection {
  double power = 0.0;  // erg/s
  double t_m = 0.0;    // s
  double detector_efficiency = 1.0;
  struct Sweep {
    std::string axis;
    double min = 0.0, max = 0.0;
    int points = 0;
    bool log = false;
  };
  std::optional<Sweep> sweep;
};

struct QuantumSection {
  int modes = 401;
  int nz = 1024;
  double sigma_q_over_dq = 5e-4;   // single-photon spectral width / dq
  double coherent_alpha_sq = 2.0;  // peak |alpha|^2 for the revival curve
  int revival_points = 41;
  std::vector<double> separations_dq_units;  // photon separation in 1/dq
  std::vector<double> thetas_rad;
};

struct ProjectConfig {
  std::uint64_t seed = 0;
  MediumParams medium{};
  std::optional<double> dipole;  // esu cm
  std::optional<double> a0;      // cm^-1
  std::complex<double> omega_rabi{0.0, 0.0};
  double b_field = 0.0;  // G
  std::string geometry = "perpendicular";
  int m_f_prime = 1;

  std::optional<SpectraSection> spectra;
  std::optional<MbSection> mb;
  std::optional<MagSection> magnetometer;
  std::optional<QuantumSection> quantum;

  DriveZeemanConfig drive_config() const;
  // Canonical resolved parameter set (unit-normalized) for provenance.
  nlohmann::json resolved() const;
};

ProjectConfig load_config(const std::filesystem::path& path);

}  // namespace tripod
