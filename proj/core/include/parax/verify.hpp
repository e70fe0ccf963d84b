#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "parax/geometry.hpp"
#include "parax/physics.hpp"
#include "parax/scheme.hpp"

// Independent checks for the main build: dense linear algebra kept deliberately
// separate from the tridiagonal production path, finite-difference probes of
// the stretch maps, and convergence studies.
namespace parax::verify {

struct DenseMatrix {
  int n = 0;
  std::vector<std::complex<double>> a;  // row major

  DenseMatrix() = default;
  explicit DenseMatrix(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_) {}

  std::complex<double>& at(int i, int j) {
    return a[static_cast<std::size_t>(i) * n + j];
  }
  const std::complex<double>& at(int i, int j) const {
    return a[static_cast<std::size_t>(i) * n + j];
  }
  static DenseMatrix identity(int n);
};

DenseMatrix from_tridiagonal(const TridiagonalMatrix& t);

// Gaussian elimination with partial pivoting, internal extended precision.
std::vector<std::complex<double>> dense_solve(const DenseMatrix& a,
                                              std::span<const std::complex<double>> b);

// Solve A X = B with one factorization; returns X.
DenseMatrix dense_solve_matrix(const DenseMatrix& a, const DenseMatrix& b);

struct EigenResult {
  std::vector<std::complex<double>> values;
  bool converged = false;
  int iterations = 0;
};

// Balancing, Householder Hessenberg reduction, then shifted QR; internal
// extended precision.
EigenResult dense_eigenvalues(const DenseMatrix& a);

// Finite-difference probe of phi, psi, theta against the closed forms, plus
// the inconsistent psi variant measured with the same stencil. The probe
// differentiates its own extended-precision copy of the forward map, so the
// reported error reflects the formulas, not double round-off.
struct MapCheckReport {
  double max_phi_rel = 0.0;
  double max_psi_rel = 0.0;
  double max_theta_rel = 0.0;
  double max_variant_psi_rel = 0.0;
  int points = 0;
};

MapCheckReport map_derivative_check(const LensGeometry& g,
                                    std::span<const std::array<double, 2>> points,
                                    double delta = 1e-5);

// Lattice of (xi, zeta) samples spanning 5..95 percent of aperture and extent.
std::vector<std::array<double, 2>> interior_map_lattice(const LensGeometry& g,
                                                        int radial_samples,
                                                        int axial_samples);

struct ConvergenceRow {
  double h = 0.0;
  double tau = 0.0;
  double error = 0.0;
  double order = 0.0;  // defined from the second row onward
};

// Manufactured field with the derivatives the stencil residual needs.
struct ManufacturedField {
  std::function<std::complex<double>(double, double)> value, dr, drr, dz, drz;
};

// Max-norm stencil residual on a sample rectangle under simultaneous (h, tau)
// halving at fixed tau/h.
std::vector<ConvergenceRow> truncation_order_study(
    const ManufacturedField& w,
    const std::function<PdeCoefficients(double, double)>& coefficients,
    double r_lo, double r_hi, double z_lo, double z_hi, int r_samples,
    int z_samples, double base_h, double sigma, int levels);

// Beam envelope on the branch matching the axial sign convention the scheme
// integrates; carrier omitted.
std::complex<double> free_space_reference(double r, double z,
                                          const GaussianSource& src, double k);

// Relative L2 error of the stepped free-space solution against the analytic
// envelope at the final level, under simultaneous grid doubling.
std::vector<ConvergenceRow> free_space_convergence(const GaussianSource& src,
                                                   double k, double radial_extent,
                                                   double axial_length, int base_m,
                                                   int base_n, int levels);

}
