#include "tripod/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>

#include "tripod/errors.hpp"

namespace tripod {

std::string format_sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
  if (!out_) {
    throw validation_error("CsvWriter: cannot open '" + path.string() + "' for writing");
  }
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void CsvWriter::header(const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ",";
    out_ << columns[i];
  }
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ",";
    out_ << format_sig12(values[i]);
  }
  out_ << "\n";
}

namespace {

void write_raw(std::ofstream& os, const void* p, std::size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

template <typename T>
void write_pod(std::ofstream& os, T v) {
  write_raw(os, &v, sizeof(v));
}

void write_complex64(std::ofstream& os, const std::vector<std::complex<double>>& v) {
  std::vector<float> buf(v.size() * 2);
  for (std::size_t i = 0; i < v.size(); ++i) {
    buf[2 * i] = static_cast<float>(v[i].real());
    buf[2 * i + 1] = static_cast<float>(v[i].imag());
  }
  write_raw(os, buf.data(), buf.size() * sizeof(float));
}

}  // namespace

void dump_field_binary(const SpaceTimeField& f, const std::filesystem::path& path) {
  const std::uint16_t probe = 1;
  if (*reinterpret_cast<const std::uint8_t*>(&probe) != 1) {
    throw validation_error("dump_field_binary: host is not little-endian");
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw validation_error("dump_field_binary: cannot open '" + path.string() + "'");
  }
  write_raw(os, "TPF1", 4);
  write_pod<std::uint32_t>(os, 1);
  write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(f.nz));
  write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(f.nt));
  write_pod<double>(os, f.dz);
  write_pod<double>(os, f.dt);
  write_pod<double>(os, f.length);
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(f.z_stride));
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(f.t_stride));
  write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(f.nt_full));
  write_pod<double>(os, f.dt_full);
  write_complex64(os, f.e1);
  write_complex64(os, f.e2);
  write_complex64(os, f.in1);
  write_complex64(os, f.in2);
  write_complex64(os, f.out1);
  write_complex64(os, f.out2);
}

}  // namespace tripod
