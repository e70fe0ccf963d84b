#include "parax/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace parax {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::domain_error(msg);
}

struct MapFactors {
  double s = 0.0;    // sqrt(R^2 - xi^2)
  double rho = 0.0;  // Z - R + s
};

// Shared domain and singularity guards for the map evaluations.
MapFactors map_factors(double xi, const LensGeometry& g, const char* who) {
  const double R = g.sphere_radius;
  const double Z = g.axial_extent;
  const std::string name(who);
  require(xi >= -1e-12 * g.aperture,
          name + ": transverse position must be nonnegative");
  require(xi <= g.aperture * (1.0 + 1e-12),
          name + ": transverse position exceeds the aperture");
  const double s2 = R * R - xi * xi;
  const double s = s2 > 0.0 ? std::sqrt(s2) : 0.0;
  require(s > 1e-12 * R, name + ": entry surface slope degenerates (s <= tolerance)");
  const double rho = Z - R + s;
  require(rho > 1e-12 * Z, name + ": map degenerates near the taper (rho <= tolerance)");
  return {s, rho};
}

void require_zeta(double zeta, const LensGeometry& g, const char* who) {
  require(zeta >= -1e-12 * g.axial_extent &&
              zeta <= g.axial_extent * (1.0 + 1e-12),
          std::string(who) + ": axial coordinate outside [0, Z]");
}

}  // namespace

double taper_radius(double sphere_radius, double axial_extent) {
  require(sphere_radius > 0.0, "taper_radius: sphere radius must be positive");
  require(axial_extent > 0.0 && axial_extent < 2.0 * sphere_radius,
          "taper_radius: axial extent must lie in (0, 2R)");
  return std::sqrt(axial_extent * (2.0 * sphere_radius - axial_extent));
}

LensGeometry make_lens_geometry(double sphere_radius, double axial_extent) {
  require(sphere_radius > 0.0, "LensGeometry: R must be positive");
  require(axial_extent > 0.0, "LensGeometry: Z must be positive");
  require(axial_extent < 2.0 * sphere_radius, "LensGeometry: Z must be below 2R");
  return make_lens_geometry(
      sphere_radius, axial_extent,
      taper_radius(sphere_radius, axial_extent) * (1.0 - default_aperture_margin));
}

LensGeometry make_lens_geometry(double sphere_radius, double axial_extent,
                                double aperture) {
  require(sphere_radius > 0.0, "LensGeometry: R must be positive");
  require(axial_extent > 0.0, "LensGeometry: Z must be positive");
  require(axial_extent < 2.0 * sphere_radius, "LensGeometry: Z must be below 2R");
  const double taper = taper_radius(sphere_radius, axial_extent);
  require(aperture > 0.0, "LensGeometry: R1 must be positive");
  require(aperture <= taper * (1.0 + 1e-12),
          "LensGeometry: R1 must not exceed the taper radius sqrt(Z(2R-Z))");
  require(aperture < sphere_radius, "LensGeometry: R1 must be smaller than R");
  return {sphere_radius, axial_extent, aperture};
}

double entry_surface(double r, const LensGeometry& g) {
  const MapFactors f = map_factors(r, g, "entry_surface");
  return g.sphere_radius - f.s;
}

StretchEvaluation stretch_maps(double xi, double zeta, const LensGeometry& g) {
  const MapFactors f = map_factors(xi, g, "stretch_maps");
  require_zeta(zeta, g, "stretch_maps");
  const double R = g.sphere_radius;
  const double Z = g.axial_extent;
  const double s = f.s;
  const double rho = f.rho;
  StretchEvaluation e;
  e.phi_over_radius = (zeta - Z) / (s * rho);
  e.phi = xi * e.phi_over_radius;
  e.psi = (zeta - Z) * (rho * R * R + 2.0 * xi * xi * s) / (rho * rho * s * s * s);
  e.theta = Z / rho;
  e.rho = rho;
  return e;
}

double psi_closed_form_variant(double xi, double zeta, const LensGeometry& g) {
  const MapFactors f = map_factors(xi, g, "psi_closed_form_variant");
  require_zeta(zeta, g, "psi_closed_form_variant");
  const double R = g.sphere_radius;
  const double Z = g.axial_extent;
  const double s = f.s;
  const double rho = f.rho;
  return (zeta - Z) * (R * R * R - s * (R * R + 2.0 * xi * xi) - Z) /
         (s * s * s * rho * rho);
}

double zeta_forward(double r, double z, const LensGeometry& g) {
  const MapFactors f = map_factors(r, g, "zeta_forward");
  const double R = g.sphere_radius;
  const double Z = g.axial_extent;
  require(z >= R - f.s - 1e-12 * Z, "zeta_forward: point is before the entry surface");
  require(z <= Z * (1.0 + 1e-12), "zeta_forward: point is past the exit plane");
  return (z - R + f.s) / f.rho * Z;
}

double z_inverse(double xi, double zeta, const LensGeometry& g) {
  const MapFactors f = map_factors(xi, g, "z_inverse");
  require_zeta(zeta, g, "z_inverse");
  return zeta * f.rho / g.axial_extent + g.sphere_radius - f.s;
}

double dropped_term_bound(const LensGeometry& g) {
  const double R = g.sphere_radius;
  const double Z = g.axial_extent;
  const double R1 = g.aperture;
  const MapFactors f = map_factors(R1, g, "dropped_term_bound");
  return R1 * R1 * Z / ((R * R - R1 * R1) * f.rho);
}

}
