#pragma once

#include <complex>
#include <vector>

#include "parax/geometry.hpp"

namespace parax {

struct OpticalParameters {
  double wavelength = 0.0;
  double index_outside = 1.0;  // n1, surrounding medium
  double index_lens = 1.0;     // n2, lens material
  double kappa_outside = 0.0;  // 2 pi n1 / lambda
  double kappa_lens = 0.0;     // 2 pi n2 / lambda
};

OpticalParameters make_optical_parameters(double wavelength, double index_outside,
                                          double index_lens);

// Point-source Gaussian beam, described by its width at the emitter and the
// emitter's on-axis position (negative: before the lens entry vertex).
struct GaussianSource {
  double waist = 0.0;
  double emitter_z = 0.0;
};

// Beam envelope with carrier, u = A/(1+i vt) exp(ikz - r^2 Q/(1+i vt)) where
// Q = 1/waist^2 + ik/(2 z0), vt = 2zQ/k and A = exp(ik z0).
std::complex<double> gaussian_envelope(double r, double z, const GaussianSource& src,
                                       double k);

// Coefficients of c4 u_rr + c5 u_rz + c3 u_r + c2 u_z + c1 u + c0 = 0 at one
// grid point, as consumed by the difference scheme. On the axis c3 is set to
// zero; the reflective boundary row never reads it.
struct PdeCoefficients {
  std::complex<double> c0, c1, c2, c3, c4, c5;
};

PdeCoefficients homogeneous_coefficients(double r, double kappa);
PdeCoefficients lens_coefficients(double xi, double zeta, const LensGeometry& g,
                                  double kappa);

// Complex scale 1/(2 i kappa theta - psi - phi/xi) normalizing the in-lens
// scheme rows; equals -1/c2 of lens_coefficients.
std::complex<double> gamma_factor(const StretchEvaluation& maps, double kappa);

// Source evaluated on the curved entry surface at nodes r_m = m R1/M.
std::vector<std::complex<double>> lens_entry_profile(const LensGeometry& g,
                                                     const GaussianSource& src,
                                                     double k, int m_intervals);

// Alternative radially decaying entry data exp(-r/decay_length).
std::vector<std::complex<double>> exponential_entry_profile(double decay_length,
                                                            double aperture,
                                                            int m_intervals);

}
