#pragma once

#include <complex>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "parax/pipeline.hpp"

namespace parax {

// Writes to a sibling temp file, then renames over the target.
void atomic_write_bytes(const std::filesystem::path& file, std::string_view bytes);

// Header `z,re,im,intensity`, one row per axial level, 17 significant digits.
std::string format_trace_csv(std::span<const TraceSample> trace);

// Header `r,re,im`, rows m = 0..M with r = m * spacing.
std::string format_snapshot_text(std::span<const std::complex<double>> field,
                                 double spacing);

// Magic `BPF1`, little-endian u64 node count, then (re, im) f64 pairs.
std::string format_snapshot_binary(std::span<const std::complex<double>> field);

std::string snapshot_file_name(int level, bool binary);

}
