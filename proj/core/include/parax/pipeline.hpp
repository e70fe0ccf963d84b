#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "parax/geometry.hpp"
#include "parax/physics.hpp"
#include "parax/scheme.hpp"

namespace parax {

enum class SourceKind { gaussian, exponential };

struct SourceSpec {
  SourceKind kind = SourceKind::gaussian;
  double waist = 0.0;         // gaussian
  double emitter_z = 0.0;     // gaussian
  double decay_length = 0.0;  // exponential
};

struct SimulationSetup {
  OpticalParameters optics;
  LensGeometry geometry;
  SourceSpec source;
  int m_intervals = 0;
  int lens_steps = 0;
  int post_steps = 0;
  double post_length = 0.0;
  int snapshot_stride = 0;  // 0 disables snapshots
  bool strict = false;      // refuse to start when h is at or below the lens bound
};

struct TraceSample {
  double z = 0.0;
  std::complex<double> axis;
};

// Lens-segment snapshots are stretched-coordinate columns, so `level` is the
// zeta index and `z` the zeta value; past the exit both coincide with
// physical z.
struct Snapshot {
  int level = 0;
  double z = 0.0;
  std::vector<std::complex<double>> field;
};

struct FocusEstimate {
  double z = 0.0;
  double intensity = 0.0;
  bool interior = false;  // peak strictly inside the scanned range
};

struct SimulationResult {
  std::vector<TraceSample> axis_trace;  // lens_steps + post_steps + 1 samples
  std::vector<Snapshot> snapshots;
  std::vector<std::complex<double>> exit_field;
  std::vector<std::complex<double>> final_field;
  double step_bound = 0.0;  // largest per-step bound encountered in the lens
  bool step_bound_ok = true;
  double dropped_term_bound = 0.0;
  FocusEstimate focus;  // scanned past the lens exit
  std::optional<double> geometric_focus;
};

double intensity(const std::complex<double>& u);

// Thin-lens estimate R/(n2 - n1) measured from the flat face.
double geometric_focus_estimate(const LensGeometry& g, const OpticalParameters& optics);

std::vector<std::complex<double>> make_entry_profile(const SimulationSetup& s);

// Full run starting from an explicit entry vector (size M+1).
SimulationResult propagate_from(const SimulationSetup& s,
                                std::vector<std::complex<double>> entry);

SimulationResult run_simulation(const SimulationSetup& s);

// Peak of |axis| over samples with z >= z_from, with quadratic refinement
// around the discrete maximum; ties break toward smaller z.
FocusEstimate find_focus(std::span<const TraceSample> trace, double z_from);

}
