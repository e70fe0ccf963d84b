#include <doctest.h>

#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include <parax/errors.hpp>
#include <parax/geometry.hpp>
#include <parax/physics.hpp>
#include <parax/scheme.hpp>

#include "test_support.hpp"

using parax::GridSpec;
using parax::PdeCoefficients;
using parax::RowKind;
using parax::TridiagonalMatrix;
using testing::rel_diff;
using cd = std::complex<double>;

namespace {

std::vector<PdeCoefficients> homogeneous_rows(const GridSpec& grid, double kappa) {
  std::vector<PdeCoefficients> rows(grid.m_intervals + 1);
  for (int m = 0; m <= grid.m_intervals; ++m)
    rows[m] = parax::homogeneous_coefficients(m * grid.h(), kappa);
  return rows;
}

std::vector<PdeCoefficients> lens_rows(const GridSpec& grid,
                                       const parax::LensGeometry& g, double kappa,
                                       double zeta) {
  std::vector<PdeCoefficients> rows(grid.m_intervals + 1);
  for (int m = 0; m <= grid.m_intervals; ++m)
    rows[m] = parax::lens_coefficients(m * grid.h(), zeta, g, kappa);
  return rows;
}

// Row-normalized scheme entries rebuilt directly from the raw stencil weights.
void check_pair_against_stencil(std::span<const PdeCoefficients> rows,
                                const GridSpec& grid) {
  const auto pair = parax::assemble_pair(rows, grid);
  const int M = grid.m_intervals;
  const double h = grid.h();
  const double tau = grid.tau();
  for (int m = 0; m <= M; ++m) {
    const RowKind kind = m == 0   ? RowKind::axis
                         : m == M ? RowKind::outer_edge
                                  : RowKind::interior;
    const auto raw = parax::row_coefficients(rows[m], h, tau, kind);
    const cd scale = 2.0 * tau / rows[m].c2;
    CHECK(rel_diff(pair.implicit_side.diag[m], scale * raw.new_center) < 1e-14);
    CHECK(rel_diff(pair.explicit_side.diag[m], scale * raw.old_center) < 1e-14);
    if (m < M) {
      CHECK(rel_diff(pair.implicit_side.super[m], scale * raw.new_upper) < 1e-14);
      CHECK(rel_diff(pair.explicit_side.super[m], scale * raw.old_upper) < 1e-14);
    }
    if (m > 0) {
      CHECK(rel_diff(pair.implicit_side.sub[m - 1], scale * raw.new_lower) < 1e-14);
      CHECK(rel_diff(pair.explicit_side.sub[m - 1], scale * raw.old_lower) < 1e-14);
    }
  }
}

}  // namespace

TEST_SUITE("scheme") {

TEST_CASE("grid spacing accessors") {
  const auto grid = parax::make_grid(8, 50, 1.6, 2.5);
  CHECK(rel_diff(grid.h(), 0.2) < 1e-15);
  CHECK(rel_diff(grid.tau(), 0.05) < 1e-15);
  CHECK(rel_diff(grid.sigma(), 0.25) < 1e-15);
  CHECK_THROWS_AS(parax::make_grid(1, 50, 1.6, 2.5), std::invalid_argument);
  CHECK_THROWS_AS(parax::make_grid(8, 0, 1.6, 2.5), std::invalid_argument);
  CHECK_THROWS_AS(parax::make_grid(8, 50, 0.0, 2.5), std::invalid_argument);
  CHECK_THROWS_AS(parax::make_grid(8, 50, 1.6, -1.0), std::invalid_argument);
}

TEST_CASE("stencil rows fold the mirror neighbor at boundaries") {
  PdeCoefficients c;
  c.c4 = cd(1.0);
  c.c3 = cd(0.0);
  c.c2 = cd(0.0, -10.0);
  const double h = 0.1;
  const double tau = 0.02;

  const auto axis = parax::row_coefficients(c, h, tau, RowKind::axis);
  const cd second = c.c4 / (2.0 * h * h);
  CHECK(axis.new_upper == 2.0 * second);
  CHECK(axis.old_upper == -2.0 * second);
  CHECK(axis.new_lower == cd(0.0));
  CHECK(axis.old_lower == cd(0.0));

  const auto edge = parax::row_coefficients(c, h, tau, RowKind::outer_edge);
  CHECK(edge.new_lower == 2.0 * second);
  CHECK(edge.old_lower == -2.0 * second);
  CHECK(edge.new_upper == cd(0.0));

  // Without drift or cross terms the interior stencil is radially symmetric.
  const auto symmetric = parax::row_coefficients(c, h, tau, RowKind::interior);
  CHECK(symmetric.new_upper == symmetric.new_lower);
  CHECK(symmetric.old_upper == symmetric.old_lower);

  CHECK_THROWS_AS(parax::row_coefficients(c, 0.0, tau, RowKind::interior),
                  std::invalid_argument);
}

TEST_CASE("normalized matrices for the homogeneous medium") {
  // kappa = 1/(2a) on a unit-spacing grid gives purely imaginary off-diagonals.
  const double a = 0.7;
  const auto grid = parax::make_grid(8, 1, 8.0, 1.0);
  const auto rows = homogeneous_rows(grid, 1.0 / (2.0 * a));
  const auto g = parax::g_matrix(rows, grid);
  const auto A = parax::a_matrix(rows, grid);

  for (const auto& v : g.diag) CHECK(v == cd(2.0));
  for (const auto& v : g.sub) CHECK(v == cd(0.0));
  for (const auto& v : g.super) CHECK(v == cd(0.0));

  const cd alpha = -grid.tau() / (rows[0].c2 * grid.h() * grid.h());
  CHECK(rel_diff(alpha, cd(0.0, -a)) < 1e-15);
  for (int m = 0; m <= 8; ++m) {
    CHECK(rel_diff(A.diag[m], 2.0 * alpha) < 1e-15);
    CHECK(std::abs(A.diag[m].real()) < 1e-15);
  }
  CHECK(rel_diff(A.super[0], -2.0 * alpha) < 1e-15);
  CHECK(rel_diff(A.sub[7], -2.0 * alpha) < 1e-15);
  for (int m = 1; m < 8; ++m) {
    CHECK(rel_diff(A.super[m], -alpha * (1.0 + 0.5 / m)) < 1e-15);
    CHECK(rel_diff(A.sub[m - 1], -alpha * (1.0 - 0.5 / m)) < 1e-15);
  }
}

TEST_CASE("lens g matrix is antisymmetric off the diagonal") {
  const auto g = parax::make_lens_geometry(1.969, 0.7643, 1.5574);
  const auto grid = parax::make_grid(32, 250, g.aperture, g.axial_extent);
  const auto rows = lens_rows(grid, g, 9974.3654998088471959, 0.5 * grid.tau());
  const auto G = parax::g_matrix(rows, grid);
  for (const auto& v : G.diag) CHECK(v == cd(2.0));
  CHECK(G.super[0] == cd(0.0));
  CHECK(G.sub[31] == cd(0.0));
  int nonzero = 0;
  for (int m = 1; m < 32; ++m) {
    CHECK(G.super[m] == -G.sub[m - 1]);
    if (G.super[m] != cd(0.0)) ++nonzero;
  }
  CHECK(nonzero == 31);
}

TEST_CASE("assembled pair matches the raw stencil rows") {
  const auto grid = parax::make_grid(16, 40, 1.4, 0.8);
  check_pair_against_stencil(homogeneous_rows(grid, 6649.5769998725647973), grid);

  const auto g = parax::make_lens_geometry(1.969, 0.7643, 1.5574);
  const auto lens_grid = parax::make_grid(16, 250, g.aperture, g.axial_extent);
  check_pair_against_stencil(
      lens_rows(lens_grid, g, 9974.3654998088471959, 0.5 * lens_grid.tau()),
      lens_grid);
}

TEST_CASE("step bound reflects the cross term") {
  const auto grid = parax::make_grid(64, 250, 1.5574, 0.7643);
  const auto hom = parax::assemble_pair(homogeneous_rows(grid, 100.0), grid);
  CHECK(hom.step_bound == 0.0);
  CHECK(hom.step_bound_ok);
  CHECK(hom.rhs_offset.empty());

  const auto g = parax::make_lens_geometry(1.969, 0.7643, 1.5574);
  const auto rows = lens_rows(grid, g, 9974.3654998088471959, 0.5 * grid.tau());
  const auto pair = parax::assemble_pair(rows, grid);
  double expected = 0.0;
  for (int m = 1; m < 64; ++m)
    expected = std::max(expected, std::abs(rows[m].c5 / rows[m].c2));
  CHECK(rel_diff(pair.step_bound, expected) < 1e-15);
  CHECK(pair.step_bound_ok == (grid.h() > expected));
}

TEST_CASE("inhomogeneous rows populate the offset") {
  const auto grid = parax::make_grid(8, 10, 1.0, 1.0);
  auto rows = homogeneous_rows(grid, 50.0);
  rows[3].c0 = cd(1.0, 2.0);
  const auto pair = parax::assemble_pair(rows, grid);
  REQUIRE(pair.rhs_offset.size() == 9);
  const cd expected = -2.0 * grid.tau() * rows[3].c0 / rows[3].c2;
  CHECK(rel_diff(pair.rhs_offset[3], expected) < 1e-15);
  CHECK(pair.rhs_offset[0] == cd(0.0));

  // A zero start propagates only the source term.
  const std::vector<cd> zero(9, cd(0.0));
  const auto stepped = parax::advance(pair, zero);
  const auto direct = parax::thomas_solve(pair.implicit_side, pair.rhs_offset);
  for (int m = 0; m <= 8; ++m) CHECK(rel_diff(stepped[m], direct[m]) < 1e-15);
}

TEST_CASE("constant fields are preserved exactly in free space") {
  const auto grid = parax::make_grid(32, 100, 2.0, 1.0);
  const auto pair = parax::assemble_pair(homogeneous_rows(grid, 200.0), grid);
  std::vector<cd> u(33, cd(0.25, -0.75));
  u = parax::advance(pair, u);
  for (const auto& v : u) CHECK(std::abs(v - cd(0.25, -0.75)) < 1e-14);
}

TEST_CASE("tridiagonal multiply on a hand example") {
  TridiagonalMatrix t;
  t.diag = {cd(1.0), cd(2.0), cd(3.0)};
  t.super = {cd(0.0, 1.0), cd(-1.0)};
  t.sub = {cd(4.0), cd(0.0, -2.0)};
  const std::vector<cd> x = {cd(1.0), cd(0.0, 1.0), cd(2.0)};
  const auto y = parax::tridiagonal_multiply(t, x);
  CHECK(y[0] == cd(1.0) + cd(0.0, 1.0) * cd(0.0, 1.0));
  CHECK(y[1] == cd(4.0) + cd(0.0, 2.0) + cd(-2.0));
  CHECK(y[2] == cd(0.0, -2.0) * cd(0.0, 1.0) + cd(6.0));
  CHECK_THROWS_AS(parax::tridiagonal_multiply(t, std::vector<cd>(4)),
                  std::invalid_argument);
}

TEST_CASE("thomas solve round trips random diagonally dominant systems") {
  std::mt19937 rng(20260823u);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 128;
    TridiagonalMatrix t;
    t.diag.resize(n);
    t.sub.resize(n - 1);
    t.super.resize(n - 1);
    for (int i = 0; i < n - 1; ++i) {
      t.sub[i] = cd(coef(rng), coef(rng));
      t.super[i] = cd(coef(rng), coef(rng));
    }
    for (int i = 0; i < n; ++i)
      t.diag[i] = cd(coef(rng), coef(rng)) + cd(4.0, 4.0);
    std::vector<cd> x(n);
    for (auto& v : x) v = cd(coef(rng), coef(rng));
    const auto rhs = parax::tridiagonal_multiply(t, x);
    const auto solved = parax::thomas_solve(t, rhs);
    for (int i = 0; i < n; ++i) CHECK(std::abs(solved[i] - x[i]) < 1e-12);
  }
}

TEST_CASE("thomas solve reports vanishing pivots") {
  TridiagonalMatrix t;
  t.diag = {cd(1e-20), cd(1.0), cd(1.0)};
  t.super = {cd(0.0), cd(0.0)};
  t.sub = {cd(0.0), cd(0.0)};
  const std::vector<cd> rhs = {cd(1.0), cd(1.0), cd(1.0)};
  CHECK_THROWS_AS(parax::thomas_solve(t, rhs), parax::NumericalError);
}

TEST_CASE("coefficient span validation") {
  const auto grid = parax::make_grid(8, 10, 1.0, 1.0);
  auto rows = homogeneous_rows(grid, 50.0);
  rows.pop_back();
  CHECK_THROWS_AS(parax::assemble_pair(rows, grid), std::invalid_argument);
  rows = homogeneous_rows(grid, 50.0);
  rows[4].c2 = cd(0.0);
  CHECK_THROWS_AS(parax::g_matrix(rows, grid), std::invalid_argument);
}

TEST_CASE("field storage layout") {
  parax::ComplexField field(5, 3);
  field.at(2, 1) = cd(7.0, -1.0);
  CHECK(field.data[1 * 5 + 2] == cd(7.0, -1.0));
  auto level = field.level_span(1);
  CHECK(level.size() == 5);
  CHECK(level[2] == cd(7.0, -1.0));
}

}  // TEST_SUITE
