#pragma once

#include <complex>
#include <span>
#include <vector>

#include "parax/physics.hpp"

namespace parax {

// Uniform computational grid: nodes r_m = m h for m = 0..M and propagation
// levels z_n = n tau for n = 0..N.
struct GridSpec {
  int m_intervals = 0;
  int z_steps = 0;
  double radial_extent = 0.0;
  double axial_length = 0.0;

  double h() const { return radial_extent / m_intervals; }
  double tau() const { return axial_length / z_steps; }
  double sigma() const { return tau() / h(); }
};

GridSpec make_grid(int m_intervals, int z_steps, double radial_extent,
                   double axial_length);

enum class RowKind { interior, axis, outer_edge };

// Raw weights of one six-point stencil row before row normalization. new_*
// multiply the unknown level, old_* the known one. The boundary kinds fold the
// mirror neighbor in; the cross and first-derivative parts cancel in the fold.
struct StencilRow {
  std::complex<double> new_lower, new_center, new_upper;
  std::complex<double> old_lower, old_center, old_upper;
  std::complex<double> inhomogeneous;  // c0 as sampled; enters the right side negated
};

StencilRow row_coefficients(const PdeCoefficients& c, double h, double tau,
                            RowKind kind);

struct TridiagonalMatrix {
  std::vector<std::complex<double>> sub;    // sub[i] is entry (i+1, i)
  std::vector<std::complex<double>> diag;   // diag[i] is entry (i, i)
  std::vector<std::complex<double>> super;  // super[i] is entry (i, i+1)

  std::size_t size() const { return diag.size(); }
};

std::vector<std::complex<double>> tridiagonal_multiply(
    const TridiagonalMatrix& t, std::span<const std::complex<double>> x);

// Forward elimination and back substitution without pivoting. Throws
// NumericalError when an elimination pivot falls below 1e-14 of the largest
// entry magnitude.
std::vector<std::complex<double>> thomas_solve(
    const TridiagonalMatrix& t, std::span<const std::complex<double>> rhs);

// Symmetric and antisymmetric halves of the normalized two-level scheme. Rows
// are scaled so G carries exactly 2 on its diagonal; the implicit and explicit
// matrices are G + A and G - A.
TridiagonalMatrix g_matrix(std::span<const PdeCoefficients> c, const GridSpec& grid);
TridiagonalMatrix a_matrix(std::span<const PdeCoefficients> c, const GridSpec& grid);

struct TridiagonalOperatorPair {
  TridiagonalMatrix implicit_side;  // applied to the unknown level
  TridiagonalMatrix explicit_side;  // applied to the known level
  std::vector<std::complex<double>> rhs_offset;  // empty when every c0 vanishes
  double step_bound = 0.0;   // max over interior rows of |c5/c2|, the h limit
  bool step_bound_ok = true; // h > step_bound
};

TridiagonalOperatorPair assemble_pair(std::span<const PdeCoefficients> c,
                                      const GridSpec& grid);

// One propagation step: solve implicit_side * u_new = explicit_side * u + offset.
std::vector<std::complex<double>> advance(const TridiagonalOperatorPair& pair,
                                          std::span<const std::complex<double>> level);

// Dense level-major storage for the few places that keep whole fields.
struct ComplexField {
  int m_nodes = 0;
  int levels = 0;
  std::vector<std::complex<double>> data;

  ComplexField() = default;
  ComplexField(int m_nodes_, int levels_)
      : m_nodes(m_nodes_), levels(levels_),
        data(static_cast<std::size_t>(m_nodes_) * levels_) {}

  std::complex<double>& at(int m, int level) {
    return data[static_cast<std::size_t>(level) * m_nodes + m];
  }
  const std::complex<double>& at(int m, int level) const {
    return data[static_cast<std::size_t>(level) * m_nodes + m];
  }
  std::span<std::complex<double>> level_span(int level) {
    return {data.data() + static_cast<std::size_t>(level) * m_nodes,
            static_cast<std::size_t>(m_nodes)};
  }
  std::span<const std::complex<double>> level_span(int level) const {
    return {data.data() + static_cast<std::size_t>(level) * m_nodes,
            static_cast<std::size_t>(m_nodes)};
  }
};

}
