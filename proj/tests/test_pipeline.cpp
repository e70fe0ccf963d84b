#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include <parax/errors.hpp>
#include <parax/pipeline.hpp>

#include "test_support.hpp"

using parax::SimulationSetup;
using parax::TraceSample;
using testing::rel_diff;
using cd = std::complex<double>;

namespace {

SimulationSetup desk_setup(int m_intervals, int lens_steps) {
  SimulationSetup s;
  s.optics = parax::make_optical_parameters(9.449e-4, 1.0, 1.5);
  s.geometry = parax::make_lens_geometry(1.969, 0.7643, 1.5574);
  s.source.kind = parax::SourceKind::gaussian;
  s.source.waist = s.geometry.aperture / 4.0;
  s.source.emitter_z = -s.geometry.axial_extent;
  s.m_intervals = m_intervals;
  s.lens_steps = lens_steps;
  s.post_steps = 40;
  s.post_length = 4.0 * s.geometry.axial_extent;
  return s;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("intensity is the field magnitude") {
  CHECK(parax::intensity(cd(3.0, 4.0)) == 5.0);
  CHECK(parax::intensity(cd(0.0)) == 0.0);
  std::mt19937 rng(5u);
  std::uniform_real_distribution<double> pick(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const cd v(pick(rng), pick(rng));
    CHECK(rel_diff(parax::intensity(v), std::hypot(v.real(), v.imag())) < 1e-15);
  }
}

TEST_CASE("geometric focus estimate") {
  const auto g = parax::make_lens_geometry(1.969, 0.7643, 1.5574);
  const auto optics = parax::make_optical_parameters(9.449e-4, 1.0, 1.5);
  CHECK(rel_diff(parax::geometric_focus_estimate(g, optics), 3.938) < 1e-12);
  const auto matched = parax::make_optical_parameters(9.449e-4, 1.5, 1.5);
  CHECK_THROWS_AS(parax::geometric_focus_estimate(g, matched), std::domain_error);
}

TEST_CASE("entry profiles follow the source kind") {
  auto s = desk_setup(64, 50);
  const auto gaussian = parax::make_entry_profile(s);
  const parax::GaussianSource src{s.source.waist, s.source.emitter_z};
  const auto direct = parax::lens_entry_profile(s.geometry, src,
                                                s.optics.kappa_lens, 64);
  REQUIRE(gaussian.size() == direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i)
    CHECK(std::abs(gaussian[i] - direct[i]) < 1e-15);

  s.source.kind = parax::SourceKind::exponential;
  s.source.decay_length = 0.4;
  const auto exponential = parax::make_entry_profile(s);
  const double h = s.geometry.aperture / 64.0;
  for (int i = 0; i <= 64; ++i)
    CHECK(rel_diff(exponential[i], cd(std::exp(-i * h / 0.4))) < 1e-14);
}

TEST_CASE("find focus locates parabolic peaks") {
  std::vector<TraceSample> trace;
  for (int i = 0; i <= 40; ++i) {
    const double z = 0.1 * i;
    const double peak_at = 2.03;
    const double value = 5.0 - (z - peak_at) * (z - peak_at);
    trace.push_back({z, cd(value, 0.0)});
  }
  const auto focus = parax::find_focus(trace, 0.0);
  CHECK(focus.interior);
  CHECK(std::abs(focus.z - 2.03) < 1e-9);
  CHECK(std::abs(focus.intensity - 5.0) < 1e-9);

  // A node-centered peak refines to itself. Keep the parabola positive; the
  // trace records moduli, so negative lobes would alias into large values.
  std::vector<TraceSample> centered;
  for (int i = 0; i <= 10; ++i) {
    const double z = 1.0 * i;
    centered.push_back({z, cd(10.0 - 0.1 * (z - 6.0) * (z - 6.0), 0.0)});
  }
  const auto at_node = parax::find_focus(centered, 0.0);
  CHECK(at_node.interior);
  CHECK(std::abs(at_node.z - 6.0) < 1e-12);

  // Monotone data peaks at the boundary and is flagged as such.
  std::vector<TraceSample> rising;
  for (int i = 0; i <= 10; ++i) rising.push_back({0.5 * i, cd(1.0 + i, 0.0)});
  const auto edge = parax::find_focus(rising, 0.0);
  CHECK_FALSE(edge.interior);
  CHECK(edge.z == 5.0);

  // The z_from cutoff masks earlier samples.
  const auto masked = parax::find_focus(trace, 3.0);
  CHECK(masked.z >= 3.0);
  CHECK_FALSE(masked.interior);
}

TEST_CASE("trace covers both segments on matched spacings") {
  auto s = desk_setup(48, 30);
  const auto res = parax::run_simulation(s);
  const double tau = s.geometry.axial_extent / 30.0;
  const double post_tau = s.post_length / 40.0;
  REQUIRE(res.axis_trace.size() == 30 + 40 + 1);
  for (int n = 0; n <= 30; ++n)
    CHECK(rel_diff(res.axis_trace[n].z, n * tau) < 1e-12);
  for (int j = 1; j <= 40; ++j)
    CHECK(rel_diff(res.axis_trace[30 + j].z, s.geometry.axial_extent + j * post_tau) <
          1e-12);
  for (std::size_t i = 1; i < res.axis_trace.size(); ++i)
    CHECK(res.axis_trace[i].z > res.axis_trace[i - 1].z);

  REQUIRE(res.exit_field.size() == 49);
  REQUIRE(res.final_field.size() == 49);
  CHECK(res.axis_trace[30].axis == res.exit_field[0]);
  CHECK(res.axis_trace[70].axis == res.final_field[0]);
  CHECK(res.step_bound > 0.0);
  CHECK(rel_diff(res.dropped_term_bound, 18747.249533174320454) < 1e-10);
  REQUIRE(res.geometric_focus.has_value());
  CHECK(rel_diff(*res.geometric_focus, 3.938) < 1e-12);
  // The focus scan starts at the exit plane; this grid is far too coarse to
  // resolve actual focusing, so only the scan contract is asserted.
  CHECK(res.focus.z >= s.geometry.axial_extent);
  CHECK(res.focus.intensity > 0.0);
}

TEST_CASE("snapshot stride selects levels") {
  auto s = desk_setup(32, 20);
  s.post_steps = 15;
  s.snapshot_stride = 7;
  const auto res = parax::run_simulation(s);
  // Levels 0..35 in stride 7: 0, 7, 14, 21, 28, 35.
  REQUIRE(res.snapshots.size() == 6);
  for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
    CHECK(res.snapshots[i].level == static_cast<int>(7 * i));
    CHECK(res.snapshots[i].field.size() == 33);
  }
  CHECK(res.snapshots[0].z == 0.0);
  CHECK(res.snapshots.back().z == res.axis_trace[35].z);

  s.snapshot_stride = 0;
  const auto none = parax::run_simulation(s);
  CHECK(none.snapshots.empty());
}

TEST_CASE("propagation is linear in the entry data") {
  auto s = desk_setup(32, 20);
  s.post_steps = 10;
  const auto entry = parax::make_entry_profile(s);
  const auto base = parax::propagate_from(s, entry);

  const cd scale(2.0, 1.0);
  auto scaled_entry = entry;
  for (auto& v : scaled_entry) v *= scale;
  const auto scaled = parax::propagate_from(s, scaled_entry);

  for (std::size_t i = 0; i < base.final_field.size(); ++i)
    CHECK(rel_diff(scaled.final_field[i], scale * base.final_field[i]) < 1e-10);
  for (std::size_t i = 0; i < base.axis_trace.size(); ++i)
    CHECK(std::abs(scaled.axis_trace[i].axis - scale * base.axis_trace[i].axis) <
          1e-10 * std::abs(scale * base.axis_trace[i].axis) + 1e-14);

  const auto zero = parax::propagate_from(s, std::vector<cd>(33, cd(0.0)));
  for (const auto& sample : zero.axis_trace) CHECK(sample.axis == cd(0.0));
  CHECK(zero.focus.intensity == 0.0);
}

TEST_CASE("strict mode refuses an unstable spacing") {
  auto s = desk_setup(48, 30);
  s.m_intervals = 20000;  // h falls below the lens step bound
  s.lens_steps = 4;
  s.post_steps = 1;
  s.strict = true;
  CHECK_THROWS_AS(parax::run_simulation(s), parax::StepBoundError);

  // Without strict the run completes but reports the violation. The early
  // steps sample the entry region, where the bound density is largest.
  s.strict = false;
  s.m_intervals = 13000;
  s.lens_steps = 30;
  const auto res = parax::run_simulation(s);
  CHECK_FALSE(res.step_bound_ok);
  CHECK(res.axis_trace.size() == 30 + 1 + 1);
}

TEST_CASE("setup validation") {
  auto s = desk_setup(32, 20);
  s.m_intervals = 1;
  CHECK_THROWS_AS(parax::run_simulation(s), std::invalid_argument);
  s = desk_setup(32, 20);
  s.lens_steps = 0;
  CHECK_THROWS_AS(parax::run_simulation(s), std::invalid_argument);
  s = desk_setup(32, 20);
  s.post_steps = 0;
  CHECK_THROWS_AS(parax::run_simulation(s), std::invalid_argument);
  s = desk_setup(32, 20);
  s.post_length = 0.0;
  CHECK_THROWS_AS(parax::run_simulation(s), std::invalid_argument);
  s = desk_setup(32, 20);
  s.snapshot_stride = -1;
  CHECK_THROWS_AS(parax::run_simulation(s), std::invalid_argument);
  s = desk_setup(32, 20);
  s.source.kind = parax::SourceKind::exponential;
  s.source.decay_length = 0.0;
  CHECK_THROWS_AS(parax::run_simulation(s), std::domain_error);
}

TEST_CASE("entry field size must match the grid") {
  const auto s = desk_setup(32, 20);
  CHECK_THROWS_AS(parax::propagate_from(s, std::vector<cd>(12, cd(1.0))),
                  std::invalid_argument);
}

}  // TEST_SUITE
