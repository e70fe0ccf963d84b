#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <parax/geometry.hpp>
#include <parax/physics.hpp>

#include "test_support.hpp"

using parax::GaussianSource;
using testing::rel_diff;
using cd = std::complex<double>;

namespace {

parax::LensGeometry published_geometry() {
  return parax::make_lens_geometry(1.969, 0.7643, 1.5574);
}

}  // namespace

TEST_SUITE("physics") {

TEST_CASE("wavenumbers from wavelength and indices") {
  const auto optics = parax::make_optical_parameters(9.449e-4, 1.0, 1.5);
  CHECK(rel_diff(optics.kappa_outside, 6649.5769998725647973) < 1e-15);
  CHECK(rel_diff(optics.kappa_lens, 9974.3654998088471959) < 1e-15);
  CHECK(rel_diff(optics.kappa_lens / optics.kappa_outside, 1.5) < 1e-15);
  CHECK_THROWS_AS(parax::make_optical_parameters(0.0, 1.0, 1.5), std::domain_error);
  CHECK_THROWS_AS(parax::make_optical_parameters(1e-3, -1.0, 1.5), std::domain_error);
  CHECK_THROWS_AS(parax::make_optical_parameters(1e-3, 1.0, 0.0), std::domain_error);
}

TEST_CASE("gaussian envelope at a pinned point") {
  const GaussianSource src{0.5, -1.0};
  const cd u = parax::gaussian_envelope(0.5, 2.5, src, 20.0);
  CHECK(std::abs(u - cd(0.1464430096740540928, -0.20845211491559965166)) < 5e-14);
  CHECK(rel_diff(std::abs(u), 0.25475054326768660177) < 5e-14);
}

TEST_CASE("gaussian envelope limits") {
  const GaussianSource src{0.5, -1.0};
  // At the emitter itself the width parameter collapses to the plain waist.
  const cd at_vertex = parax::gaussian_envelope(0.0, 0.0, src, 20.0);
  CHECK(rel_diff(std::abs(at_vertex), 1.0) < 1e-14);
  // Magnitude decays monotonically with radius at fixed z.
  double prev = std::abs(parax::gaussian_envelope(0.0, 1.0, src, 20.0));
  for (int i = 1; i <= 8; ++i) {
    const double now = std::abs(parax::gaussian_envelope(0.25 * i, 1.0, src, 20.0));
    CHECK(now < prev);
    prev = now;
  }
}

TEST_CASE("homogeneous coefficients") {
  const double kappa = 9974.3654998088471959;
  const auto axis = parax::homogeneous_coefficients(0.0, kappa);
  CHECK(axis.c4 == cd(1.0));
  CHECK(axis.c3 == cd(0.0));
  CHECK(axis.c5 == cd(0.0));
  CHECK(axis.c1 == cd(0.0));
  CHECK(axis.c0 == cd(0.0));
  CHECK(rel_diff(axis.c2, cd(0.0, -2.0 * kappa)) < 1e-15);

  const auto interior = parax::homogeneous_coefficients(0.25, kappa);
  CHECK(rel_diff(interior.c3, cd(4.0)) < 1e-15);
  CHECK(interior.c2 == axis.c2);
}

TEST_CASE("lens coefficients at a pinned point") {
  const auto g = published_geometry();
  const double kappa = 9975.43;
  const double xi = g.aperture / 2.0;
  const double zeta = g.axial_extent / 2.0;
  const auto maps = parax::stretch_maps(xi, zeta, g);
  const auto c = parax::lens_coefficients(xi, zeta, g, kappa);

  CHECK(c.c4 == cd(1.0));
  CHECK(rel_diff(c.c5, cd(2.0 * maps.phi)) < 1e-14);
  CHECK(rel_diff(c.c5, cd(-0.54506079252101075892)) < 1e-13);
  CHECK(rel_diff(c.c3, cd(1.0 / xi)) < 1e-14);
  CHECK(rel_diff(c.c3, cd(1.2841916013869269295)) < 1e-13);
  CHECK(rel_diff(c.c2, cd(-1.1535600236660659818, -25255.109939525049906)) < 1e-13);
  CHECK(c.c1 == cd(0.0));
  CHECK(c.c0 == cd(0.0));

  const cd gamma = parax::gamma_factor(maps, kappa);
  CHECK(rel_diff(gamma, cd(1.8085964312606053597e-9, -3.9595947129441858876e-5)) < 1e-13);
  CHECK(rel_diff(gamma * (-c.c2), cd(1.0)) < 1e-14);
}

TEST_CASE("gamma factor on the axis") {
  const auto g = published_geometry();
  const double kappa = 9975.43;
  const auto at_exit = parax::stretch_maps(0.0, g.axial_extent, g);
  const cd gamma = parax::gamma_factor(at_exit, kappa);
  CHECK(rel_diff(gamma, cd(0.0, -5.0123152585903565059e-5)) < 1e-13);

  // On the axis c3 folds into c2 via the finite phi/xi limit.
  const auto c = parax::lens_coefficients(0.0, g.axial_extent / 2.0, g, kappa);
  CHECK(c.c3 == cd(0.0));
  CHECK(c.c5 == cd(0.0));
  const auto mid = parax::stretch_maps(0.0, g.axial_extent / 2.0, g);
  const cd expected_c2 = cd(mid.psi + mid.phi_over_radius, -2.0 * kappa * mid.theta);
  CHECK(rel_diff(c.c2, expected_c2) < 1e-14);
}

TEST_CASE("entry profile samples the curved surface") {
  const auto g = published_geometry();
  const GaussianSource src{g.aperture / 4.0, -g.axial_extent};
  const double k = 6649.5769998725647973;
  const int m = 16;
  const auto u0 = parax::lens_entry_profile(g, src, k, m);
  REQUIRE(u0.size() == static_cast<std::size_t>(m + 1));

  const double h = g.aperture / m;
  for (int j : {0, 5, 16}) {
    const double r = j * h;
    const cd direct = parax::gaussian_envelope(r, parax::entry_surface(r, g), src, k);
    CHECK(std::abs(u0[j] - direct) < 1e-14);
  }
  CHECK(rel_diff(std::abs(u0[0]), 1.0) < 1e-13);
  CHECK(std::abs(u0[m]) < std::abs(u0[0]));
}

TEST_CASE("exponential entry profile") {
  const auto u0 = parax::exponential_entry_profile(0.35, 1.4, 7);
  REQUIRE(u0.size() == 8);
  CHECK(u0[0] == cd(1.0));
  const double h = 1.4 / 7.0;
  for (int j = 1; j < 8; ++j) {
    CHECK(rel_diff(u0[j], cd(std::exp(-j * h / 0.35))) < 1e-14);
  }
  CHECK_THROWS_AS(parax::exponential_entry_profile(0.0, 1.4, 7), std::domain_error);
}

TEST_CASE("entry profile rejects degenerate arguments") {
  const auto g = published_geometry();
  const double k = 6649.5769998725647973;
  CHECK_THROWS_AS(parax::lens_entry_profile(g, GaussianSource{0.0, -1.0}, k, 16),
                  std::domain_error);
  CHECK_THROWS_AS(parax::lens_entry_profile(g, GaussianSource{0.5, -1.0}, k, 1),
                  std::invalid_argument);
}

}  // TEST_SUITE
