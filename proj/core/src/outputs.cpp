#include "parax/outputs.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace parax {
namespace {

void append_le64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_le_double(std::string& out, double v) {
  append_le64(out, std::bit_cast<std::uint64_t>(v));
}

void append_row(std::string& out, std::span<const double> cells) {
  char buf[32];
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out.push_back(',');
    std::snprintf(buf, sizeof buf, "%.17g", cells[i]);
    out += buf;
  }
  out.push_back('\n');
}

}  // namespace

void atomic_write_bytes(const std::filesystem::path& file, std::string_view bytes) {
  std::filesystem::path temp = file;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + temp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + temp.string());
  }
  std::filesystem::rename(temp, file);
}

std::string format_trace_csv(std::span<const TraceSample> trace) {
  std::string out = "z,re,im,intensity\n";
  for (const TraceSample& s : trace) {
    const double cells[] = {s.z, s.axis.real(), s.axis.imag(), intensity(s.axis)};
    append_row(out, cells);
  }
  return out;
}

std::string format_snapshot_text(std::span<const std::complex<double>> field,
                                 double spacing) {
  std::string out = "r,re,im\n";
  for (std::size_t m = 0; m < field.size(); ++m) {
    const double cells[] = {static_cast<double>(m) * spacing, field[m].real(),
                            field[m].imag()};
    append_row(out, cells);
  }
  return out;
}

std::string format_snapshot_binary(std::span<const std::complex<double>> field) {
  std::string out = "BPF1";
  append_le64(out, static_cast<std::uint64_t>(field.size()));
  for (const auto& u : field) {
    append_le_double(out, u.real());
    append_le_double(out, u.imag());
  }
  return out;
}

std::string snapshot_file_name(int level, bool binary) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%06d.%s", level, binary ? "bin" : "txt");
  return buf;
}

}
