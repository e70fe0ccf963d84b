#include "parax/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "parax/errors.hpp"

namespace parax {

namespace {

void check_coefficient_span(std::span<const PdeCoefficients> c, const GridSpec& grid,
                            const char* who) {
  if (static_cast<int>(c.size()) != grid.m_intervals + 1)
    throw std::invalid_argument(std::string(who) +
                                ": coefficient count must equal node count M+1");
  for (const auto& row : c) {
    if (std::abs(row.c2) == 0.0)
      throw std::invalid_argument(std::string(who) +
                                  ": axial coefficient c2 vanishes at a node");
  }
}

double max_abs(const TridiagonalMatrix& t) {
  double m = 0.0;
  for (const auto& v : t.diag) m = std::max(m, std::abs(v));
  for (const auto& v : t.sub) m = std::max(m, std::abs(v));
  for (const auto& v : t.super) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

GridSpec make_grid(int m_intervals, int z_steps, double radial_extent,
                   double axial_length) {
  if (m_intervals < 2)
    throw std::invalid_argument("GridSpec: need at least two transverse intervals");
  if (z_steps < 1)
    throw std::invalid_argument("GridSpec: need at least one propagation step");
  if (!(radial_extent > 0.0))
    throw std::invalid_argument("GridSpec: radial extent must be positive");
  if (!(axial_length > 0.0))
    throw std::invalid_argument("GridSpec: axial length must be positive");
  return {m_intervals, z_steps, radial_extent, axial_length};
}

StencilRow row_coefficients(const PdeCoefficients& c, double h, double tau,
                            RowKind kind) {
  if (!(h > 0.0) || !(tau > 0.0))
    throw std::invalid_argument("row_coefficients: h and tau must be positive");
  const std::complex<double> cross = c.c5 / (2.0 * h * tau);
  const std::complex<double> second = c.c4 / (2.0 * h * h);
  const std::complex<double> drift = c.c3 / (4.0 * h);
  const std::complex<double> axial = c.c2 / tau;
  const std::complex<double> react = 0.5 * c.c1;

  StencilRow row;
  row.new_center = -2.0 * second + axial + react;
  row.old_center = 2.0 * second + axial - react;
  switch (kind) {
    case RowKind::interior:
      row.new_upper = cross + second + drift;
      row.new_lower = -cross + second - drift;
      row.old_upper = cross - second - drift;
      row.old_lower = -cross - second + drift;
      break;
    case RowKind::axis:
      row.new_upper = 2.0 * second;
      row.old_upper = -2.0 * second;
      break;
    case RowKind::outer_edge:
      row.new_lower = 2.0 * second;
      row.old_lower = -2.0 * second;
      break;
  }
  row.inhomogeneous = c.c0;
  return row;
}

TridiagonalMatrix g_matrix(std::span<const PdeCoefficients> c, const GridSpec& grid) {
  check_coefficient_span(c, grid, "g_matrix");
  const int M = grid.m_intervals;
  const double h = grid.h();
  TridiagonalMatrix g;
  g.diag.assign(M + 1, 2.0);
  g.sub.assign(M, 0.0);
  g.super.assign(M, 0.0);
  for (int m = 1; m < M; ++m) {
    const std::complex<double> cross = c[m].c5 / (c[m].c2 * h);
    g.super[m] = cross;
    g.sub[m - 1] = -cross;
  }
  return g;
}

TridiagonalMatrix a_matrix(std::span<const PdeCoefficients> c, const GridSpec& grid) {
  check_coefficient_span(c, grid, "a_matrix");
  const int M = grid.m_intervals;
  const double h = grid.h();
  const double tau = grid.tau();
  TridiagonalMatrix a;
  a.diag.assign(M + 1, 0.0);
  a.sub.assign(M, 0.0);
  a.super.assign(M, 0.0);
  for (int m = 0; m <= M; ++m) {
    const std::complex<double> radial = -(tau * c[m].c4) / (c[m].c2 * h * h);
    a.diag[m] = 2.0 * radial + tau * c[m].c1 / c[m].c2;
    if (m == 0) {
      a.super[0] = -2.0 * radial;
    } else if (m == M) {
      a.sub[M - 1] = -2.0 * radial;
    } else {
      const std::complex<double> drift = tau * c[m].c3 / (2.0 * c[m].c2 * h);
      a.super[m] = -radial + drift;
      a.sub[m - 1] = -radial - drift;
    }
  }
  return a;
}

TridiagonalOperatorPair assemble_pair(std::span<const PdeCoefficients> c,
                                      const GridSpec& grid) {
  check_coefficient_span(c, grid, "assemble_pair");
  const int M = grid.m_intervals;
  const double h = grid.h();
  const double tau = grid.tau();

  TridiagonalOperatorPair pair;
  const TridiagonalMatrix g = g_matrix(c, grid);
  const TridiagonalMatrix a = a_matrix(c, grid);
  auto& b = pair.implicit_side;
  auto& e = pair.explicit_side;
  b.diag.resize(M + 1);
  e.diag.resize(M + 1);
  b.sub.resize(M);
  e.sub.resize(M);
  b.super.resize(M);
  e.super.resize(M);
  for (int m = 0; m <= M; ++m) {
    b.diag[m] = g.diag[m] + a.diag[m];
    e.diag[m] = g.diag[m] - a.diag[m];
  }
  for (int m = 0; m < M; ++m) {
    b.sub[m] = g.sub[m] + a.sub[m];
    e.sub[m] = g.sub[m] - a.sub[m];
    b.super[m] = g.super[m] + a.super[m];
    e.super[m] = g.super[m] - a.super[m];
  }

  bool any_offset = false;
  for (const auto& row : c)
    if (std::abs(row.c0) > 0.0) any_offset = true;
  if (any_offset) {
    pair.rhs_offset.resize(M + 1);
    for (int m = 0; m <= M; ++m)
      pair.rhs_offset[m] = -2.0 * tau * c[m].c0 / c[m].c2;
  }

  double bound = 0.0;
  for (int m = 1; m < M; ++m)
    bound = std::max(bound, std::abs(c[m].c5 / c[m].c2));
  pair.step_bound = bound;
  pair.step_bound_ok = h > bound;
  return pair;
}

std::vector<std::complex<double>> tridiagonal_multiply(
    const TridiagonalMatrix& t, std::span<const std::complex<double>> x) {
  const std::size_t n = t.size();
  if (x.size() != n || t.sub.size() + 1 != n || t.super.size() + 1 != n)
    throw std::invalid_argument("tridiagonal_multiply: size mismatch");
  std::vector<std::complex<double>> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> v = t.diag[i] * x[i];
    if (i > 0) v += t.sub[i - 1] * x[i - 1];
    if (i + 1 < n) v += t.super[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

std::vector<std::complex<double>> thomas_solve(
    const TridiagonalMatrix& t, std::span<const std::complex<double>> rhs) {
  const std::size_t n = t.size();
  if (n == 0) throw std::invalid_argument("thomas_solve: empty system");
  if (rhs.size() != n || t.sub.size() + 1 != n || t.super.size() + 1 != n)
    throw std::invalid_argument("thomas_solve: size mismatch");

  const double guard = 1e-14 * max_abs(t);
  std::vector<std::complex<double>> upper(n > 1 ? n - 1 : 0);
  std::vector<std::complex<double>> y(n);

  std::complex<double> denom = t.diag[0];
  if (std::abs(denom) <= guard)
    throw NumericalError("thomas_solve: vanishing pivot at row 0");
  if (n > 1) upper[0] = t.super[0] / denom;
  y[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = t.diag[i] - t.sub[i - 1] * upper[i - 1];
    if (std::abs(denom) <= guard)
      throw NumericalError("thomas_solve: vanishing pivot at row " +
                           std::to_string(i));
    if (i + 1 < n) upper[i] = t.super[i] / denom;
    y[i] = (rhs[i] - t.sub[i - 1] * y[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) y[i] -= upper[i] * y[i + 1];
  return y;
}

std::vector<std::complex<double>> advance(const TridiagonalOperatorPair& pair,
                                          std::span<const std::complex<double>> level) {
  std::vector<std::complex<double>> rhs =
      tridiagonal_multiply(pair.explicit_side, level);
  if (!pair.rhs_offset.empty()) {
    if (pair.rhs_offset.size() != rhs.size())
      throw std::invalid_argument("advance: offset size mismatch");
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += pair.rhs_offset[i];
  }
  return thomas_solve(pair.implicit_side, rhs);
}

}
