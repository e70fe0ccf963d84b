#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "parax/pipeline.hpp"

namespace parax {

// Fully resolved run description; every default has been applied, so echoing
// and re-parsing is the identity.
struct SimulationConfig {
  double wavelength = 0.0;
  double index_outside = 0.0;
  double index_lens = 0.0;
  SourceKind source_kind = SourceKind::gaussian;
  double waist = 0.0;
  double emitter_z = 0.0;
  double decay_length = 0.0;
  double sphere_radius = 0.0;
  double axial_extent = 0.0;
  double aperture = 0.0;
  int m_intervals = 0;
  int lens_steps = 0;
  double post_length = 0.0;
  int post_steps = 0;
  int snapshot_stride = 0;
  bool binary_snapshots = false;
};

// `key = value` lines under [section] headers; '#' starts a comment. Unknown
// sections or keys and duplicate keys are rejected with their line number.
SimulationConfig parse_config_text(std::string_view text, std::string_view origin);
SimulationConfig parse_config(const std::filesystem::path& path);

// Canonical serialization; parse(echo(c)) reproduces c exactly.
std::string echo_config(const SimulationConfig& c);

SimulationSetup make_setup(const SimulationConfig& c, bool strict);

}
