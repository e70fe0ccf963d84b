#pragma once

#include <functional>
#include <span>
#include <vector>

#include "parax/geometry.hpp"
#include "parax/scheme.hpp"

namespace parax {

inline constexpr double semistability_tolerance = 1e-10;

// Largest value of 2|gamma phi| over the lens cross-section, found on a
// lattice and sharpened by two local refinement passes. Transverse spacings
// at or below this value violate the in-lens step bound.
double step_bound_limit(const LensGeometry& g, double kappa, int sampling = 512);

// Same maximization for an arbitrary nonnegative density on a rectangle.
double step_bound_limit_sampled(const std::function<double(double, double)>& density,
                                double r_lo, double r_hi, double z_lo, double z_hi,
                                int sampling = 512);

// Largest interval count whose spacing stays strictly above the bound.
long long max_intervals(const LensGeometry& g, double kappa, int sampling = 512);

struct TaperTableRow {
  double axial_extent = 0.0;
  double kappa = 0.0;
  double h_limit = 0.0;
  long long max_m = 0;
  bool valid = false;
};

// max_intervals over a grid of extents and wave numbers, each cell opened to
// the full taper aperture sqrt(Z(2R - Z)). Cells with no admissible lens
// (extent outside (0, 2R) or aperture reaching the sphere radius) come back
// invalid instead of throwing.
std::vector<TaperTableRow> taper_table(double sphere_radius,
                                       std::span<const double> axial_extents,
                                       std::span<const double> kappas,
                                       int sampling = 512);

struct SemistabilityReport {
  double min_real = 0.0;
  double max_real = 0.0;
  bool semistable = false;
  bool converged = false;
};

// Eigenvalue real-part range of the antisymmetric half of the step operator;
// dense route, so dimension is capped at 512.
SemistabilityReport semistability_check(const TridiagonalMatrix& a);

struct SpectralRadiusEstimate {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Power iteration on u <- implicit^{-1} (explicit u) with periodic
// normalization, stopping when the Rayleigh-quotient modulus stabilizes.
SpectralRadiusEstimate spectral_radius_power(const TridiagonalOperatorPair& pair,
                                             int max_iterations = 10000,
                                             double rel_tol = 1e-8,
                                             unsigned seed = 1u);

// Dense eigenvalue route; dimension capped at 512.
SpectralRadiusEstimate spectral_radius_dense(const TridiagonalOperatorPair& pair);

}
