#pragma once

namespace parax {

// Plano-convex lens: a spherical entry cap of radius R centered at (r=0, z=R)
// and a flat exit plane at z = Z. The cap meets the plane at the taper radius;
// the computational aperture R1 must stay at or inside it.
struct LensGeometry {
  double sphere_radius = 0.0;  // R
  double axial_extent = 0.0;   // Z, lens thickness on axis
  double aperture = 0.0;       // R1, transverse extent of the domain
};

// Radius sqrt(Z(2R - Z)) where the entry cap intersects the exit plane.
double taper_radius(double sphere_radius, double axial_extent);

// Relative shrink applied to the taper radius when no aperture is given,
// keeping the map nondegenerate on the outermost grid node.
inline constexpr double default_aperture_margin = 1e-6;

LensGeometry make_lens_geometry(double sphere_radius, double axial_extent);
LensGeometry make_lens_geometry(double sphere_radius, double axial_extent,
                                double aperture);

// Axial position z(r) = R - sqrt(R^2 - r^2) of the entry cap.
double entry_surface(double r, const LensGeometry& g);

// Derivatives of the map that straightens the entry cap onto zeta = 0:
//   phi = dzeta/dr, psi = d2zeta/dr2, theta = dzeta/dz,
// with rho = Z - R + sqrt(R^2 - xi^2) the local axial thickness.
// phi_over_radius is phi/xi, which stays finite on the axis.
struct StretchEvaluation {
  double phi = 0.0;
  double psi = 0.0;
  double theta = 0.0;
  double rho = 0.0;
  double phi_over_radius = 0.0;
};

StretchEvaluation stretch_maps(double xi, double zeta, const LensGeometry& g);

// Alternative closed form for the second radial derivative. It is not
// algebraically consistent with the forward map; retained so diagnostics can
// flag it against the finite-difference oracle.
double psi_closed_form_variant(double xi, double zeta, const LensGeometry& g);

// Map a physical point inside the lens to its straightened coordinate.
double zeta_forward(double r, double z, const LensGeometry& g);

// Inverse of zeta_forward at fixed transverse position.
double z_inverse(double xi, double zeta, const LensGeometry& g);

// Upper bound on the size of the neglected phi^2 cross term relative to the
// retained ones: R1^2 Z / ((R^2 - R1^2) rho(R1)). Reported, not enforced.
double dropped_term_bound(const LensGeometry& g);

}
