#include "parax/pipeline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "parax/errors.hpp"
#include "parax/stability.hpp"

namespace parax {
namespace {

void check_setup(const SimulationSetup& s) {
  if (s.m_intervals < 2) throw std::invalid_argument("SimulationSetup: need M >= 2");
  if (s.lens_steps < 1) throw std::invalid_argument("SimulationSetup: need N >= 1");
  if (s.post_steps < 1) throw std::invalid_argument("SimulationSetup: need post steps >= 1");
  if (!(s.post_length > 0.0))
    throw std::invalid_argument("SimulationSetup: post length must be positive");
  if (s.snapshot_stride < 0)
    throw std::invalid_argument("SimulationSetup: snapshot stride must be nonnegative");
}

void check_finite(const std::vector<std::complex<double>>& u, int level) {
  for (const auto& x : u)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      throw NumericalError("nonfinite field value at level " + std::to_string(level));
}

}  // namespace

double intensity(const std::complex<double>& u) { return std::abs(u); }

double geometric_focus_estimate(const LensGeometry& g, const OpticalParameters& optics) {
  const double dn = optics.index_lens - optics.index_outside;
  if (dn == 0.0)
    throw std::domain_error("geometric_focus_estimate: refraction indices must differ");
  return g.sphere_radius / dn;
}

std::vector<std::complex<double>> make_entry_profile(const SimulationSetup& s) {
  check_setup(s);
  if (s.source.kind == SourceKind::gaussian) {
    const GaussianSource src{s.source.waist, s.source.emitter_z};
    return lens_entry_profile(s.geometry, src, s.optics.kappa_lens, s.m_intervals);
  }
  return exponential_entry_profile(s.source.decay_length, s.geometry.aperture,
                                   s.m_intervals);
}

SimulationResult propagate_from(const SimulationSetup& s,
                                std::vector<std::complex<double>> entry) {
  check_setup(s);
  const int m = s.m_intervals;
  if (entry.size() != static_cast<std::size_t>(m + 1))
    throw std::invalid_argument("propagate_from: entry vector size mismatch");
  const GridSpec lens_grid =
      make_grid(m, s.lens_steps, s.geometry.aperture, s.geometry.axial_extent);
  const double h = lens_grid.h();
  const double tau = lens_grid.tau();

  if (s.strict) {
    const double limit = step_bound_limit(s.geometry, s.optics.kappa_lens);
    if (!(h > limit))
      throw StepBoundError("transverse spacing " + std::to_string(h) +
                           " at or below the lens step bound " + std::to_string(limit));
  }

  SimulationResult res;
  res.dropped_term_bound = dropped_term_bound(s.geometry);
  res.geometric_focus.reset();
  if (s.optics.index_lens != s.optics.index_outside)
    res.geometric_focus = geometric_focus_estimate(s.geometry, s.optics);

  const int total_levels = s.lens_steps + s.post_steps;
  res.axis_trace.reserve(total_levels + 1);
  std::vector<std::complex<double>> u = std::move(entry);
  check_finite(u, 0);

  auto record_level = [&](int level, double z) {
    res.axis_trace.push_back({z, u[0]});
    if (s.snapshot_stride > 0 && level % s.snapshot_stride == 0)
      res.snapshots.push_back({level, z, u});
  };
  record_level(0, 0.0);

  std::vector<PdeCoefficients> coeffs(m + 1);
  for (int n = 0; n < s.lens_steps; ++n) {
    const double zeta_half = (n + 0.5) * tau;
    for (int i = 0; i <= m; ++i)
      coeffs[i] = lens_coefficients(i * h, zeta_half, s.geometry, s.optics.kappa_lens);
    const TridiagonalOperatorPair pair = assemble_pair(coeffs, lens_grid);
    res.step_bound = std::max(res.step_bound, pair.step_bound);
    if (!pair.step_bound_ok) {
      res.step_bound_ok = false;
      if (s.strict)
        throw StepBoundError("lens step " + std::to_string(n) +
                             " violates the transverse step bound");
    }
    u = parax::advance(pair, u);
    check_finite(u, n + 1);
    record_level(n + 1, (n + 1) * tau);
  }
  res.exit_field = u;

  const double post_tau = s.post_length / s.post_steps;
  const GridSpec post_grid = make_grid(m, s.post_steps, s.geometry.aperture, s.post_length);
  for (int i = 0; i <= m; ++i)
    coeffs[i] = homogeneous_coefficients(i * h, s.optics.kappa_outside);
  const TridiagonalOperatorPair post_pair = assemble_pair(coeffs, post_grid);
  for (int j = 0; j < s.post_steps; ++j) {
    u = parax::advance(post_pair, u);
    check_finite(u, s.lens_steps + j + 1);
    record_level(s.lens_steps + j + 1, s.geometry.axial_extent + (j + 1) * post_tau);
  }
  res.final_field = std::move(u);

  res.focus = find_focus(res.axis_trace, s.geometry.axial_extent);
  return res;
}

SimulationResult run_simulation(const SimulationSetup& s) {
  return propagate_from(s, make_entry_profile(s));
}

FocusEstimate find_focus(std::span<const TraceSample> trace, double z_from) {
  FocusEstimate est;
  int first = -1, last = -1, best = -1;
  double peak = -1.0;
  for (int i = 0; i < static_cast<int>(trace.size()); ++i) {
    if (trace[i].z < z_from) continue;
    if (first < 0) first = i;
    last = i;
    const double v = intensity(trace[i].axis);
    if (v > peak) {
      peak = v;
      best = i;
    }
  }
  if (best < 0) throw std::invalid_argument("find_focus: empty scan range");
  est.z = trace[best].z;
  est.intensity = peak;
  est.interior = best > first && best < last;
  if (est.interior) {
    const double x1 = trace[best - 1].z, x2 = trace[best].z, x3 = trace[best + 1].z;
    const double y1 = intensity(trace[best - 1].axis);
    const double y2 = peak;
    const double y3 = intensity(trace[best + 1].axis);
    const double num =
        (x2 - x1) * (x2 - x1) * (y2 - y3) - (x2 - x3) * (x2 - x3) * (y2 - y1);
    const double den = (x2 - x1) * (y2 - y3) - (x2 - x3) * (y2 - y1);
    if (std::abs(den) > 1e-300) {
      const double zv = x2 - 0.5 * num / den;
      if (zv > x1 && zv < x3) {
        // value of the fitted parabola at its vertex
        const double l1 = (zv - x2) * (zv - x3) / ((x1 - x2) * (x1 - x3));
        const double l2 = (zv - x1) * (zv - x3) / ((x2 - x1) * (x2 - x3));
        const double l3 = (zv - x1) * (zv - x2) / ((x3 - x1) * (x3 - x2));
        est.z = zv;
        est.intensity = l1 * y1 + l2 * y2 + l3 * y3;
      }
    }
  }
  return est;
}

}
