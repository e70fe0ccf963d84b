#include "parax/physics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace parax {

namespace {

using namespace std::complex_literals;

void require(bool ok, const char* msg) {
  if (!ok) throw std::domain_error(msg);
}

void require_source(const GaussianSource& src) {
  require(src.waist > 0.0, "GaussianSource: waist must be positive");
  require(src.emitter_z != 0.0, "GaussianSource: emitter position must be nonzero");
}

}  // namespace

OpticalParameters make_optical_parameters(double wavelength, double index_outside,
                                          double index_lens) {
  require(wavelength > 0.0, "OpticalParameters: wavelength must be positive");
  require(index_outside > 0.0, "OpticalParameters: n1 must be positive");
  require(index_lens > 0.0, "OpticalParameters: n2 must be positive");
  const double two_pi = 2.0 * std::numbers::pi;
  return {wavelength, index_outside, index_lens,
          two_pi * index_outside / wavelength, two_pi * index_lens / wavelength};
}

std::complex<double> gaussian_envelope(double r, double z, const GaussianSource& src,
                                       double k) {
  require_source(src);
  require(r >= 0.0, "gaussian_envelope: radius must be nonnegative");
  const std::complex<double> Q =
      1.0 / (src.waist * src.waist) + 1.0i * k / (2.0 * src.emitter_z);
  const std::complex<double> vt = 2.0 * z * Q / k;
  const std::complex<double> P = 1.0 + 1.0i * vt;
  require(std::abs(P) > 0.0, "gaussian_envelope: degenerate beam parameter");
  const std::complex<double> A = std::exp(1.0i * (k * src.emitter_z));
  return A / P * std::exp(1.0i * (k * z) - r * r * Q / P);
}

PdeCoefficients homogeneous_coefficients(double r, double kappa) {
  require(kappa > 0.0, "homogeneous_coefficients: kappa must be positive");
  require(r >= 0.0, "homogeneous_coefficients: radius must be nonnegative");
  PdeCoefficients c;
  c.c2 = -2.0i * kappa;
  c.c3 = r > 0.0 ? 1.0 / r : 0.0;
  c.c4 = 1.0;
  return c;
}

PdeCoefficients lens_coefficients(double xi, double zeta, const LensGeometry& g,
                                  double kappa) {
  require(kappa > 0.0, "lens_coefficients: kappa must be positive");
  const StretchEvaluation e = stretch_maps(xi, zeta, g);
  PdeCoefficients c;
  c.c2 = std::complex<double>(e.psi + e.phi_over_radius, -2.0 * kappa * e.theta);
  c.c3 = xi > 0.0 ? 1.0 / xi : 0.0;
  c.c4 = 1.0;
  c.c5 = 2.0 * e.phi;
  return c;
}

std::complex<double> gamma_factor(const StretchEvaluation& maps, double kappa) {
  require(kappa > 0.0, "gamma_factor: kappa must be positive");
  return 1.0 / std::complex<double>(-(maps.psi + maps.phi_over_radius),
                                    2.0 * kappa * maps.theta);
}

std::vector<std::complex<double>> lens_entry_profile(const LensGeometry& g,
                                                     const GaussianSource& src,
                                                     double k, int m_intervals) {
  require_source(src);
  if (m_intervals < 2)
    throw std::invalid_argument("lens_entry_profile: need at least two intervals");
  const double h = g.aperture / m_intervals;
  std::vector<std::complex<double>> u(m_intervals + 1);
  for (int m = 0; m <= m_intervals; ++m) {
    const double r = m * h;
    const double z_entry =
        g.sphere_radius - std::sqrt(g.sphere_radius * g.sphere_radius - r * r);
    u[m] = gaussian_envelope(r, z_entry, src, k);
  }
  return u;
}

std::vector<std::complex<double>> exponential_entry_profile(double decay_length,
                                                            double aperture,
                                                            int m_intervals) {
  require(decay_length > 0.0, "exponential_entry_profile: decay length must be positive");
  require(aperture > 0.0, "exponential_entry_profile: aperture must be positive");
  if (m_intervals < 2)
    throw std::invalid_argument("exponential_entry_profile: need at least two intervals");
  const double h = aperture / m_intervals;
  std::vector<std::complex<double>> u(m_intervals + 1);
  for (int m = 0; m <= m_intervals; ++m) u[m] = std::exp(-m * h / decay_length);
  return u;
}

}
