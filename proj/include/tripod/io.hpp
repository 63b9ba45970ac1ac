#pragma once

// Deterministic output writers: CSV with 12 significant digits and LF line
// endings (fixed so golden-file comparisons stay byte-stable), and the binary
// space-time field dump.
//
// Binary field layout (little-endian):
//   char[4]  magic "TPF1"
//   u32      version (1)
//   u64      nz, nt            interior record dimensions (may be 0)
//   f64      dz_cm, dt_s, length_cm
//   u32      z_stride, t_stride
//   u64      nt_full
//   f64      dt_full_s
//   complex64[nz*nt]   E1 interior, row-major [iz][it] (float re, float im)
//   complex64[nz*nt]   E2 interior
//   complex64[nt_full] in1, in2, out1, out2 boundary series
// Envelope values are in Rabi-frequency units (rad/s).

#include <complex>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tripod/mb_solver.hpp"

namespace tripod {

std::string format_sig12(double v);

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  void comment(const std::string& text);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);

 private:
  std::ofstream out_;
};

void dump_field_binary(const SpaceTimeField& f, const std::filesystem::path& path);

}  // namespace tripod
