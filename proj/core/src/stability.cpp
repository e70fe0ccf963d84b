#include "parax/stability.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "parax/errors.hpp"
#include "parax/physics.hpp"
#include "parax/verify.hpp"

namespace parax {
namespace {

struct Peak {
  double value = 0.0;
  double x = 0.0;
  double z = 0.0;
};

Peak scan(const std::function<double(double, double)>& f, double x_lo, double x_hi,
          int nx, double z_lo, double z_hi, int nz) {
  Peak best;
  best.value = -1.0;
  for (int i = 0; i < nx; ++i) {
    const double x = nx == 1 ? x_lo : x_lo + (x_hi - x_lo) * i / (nx - 1);
    for (int j = 0; j < nz; ++j) {
      const double z = nz == 1 ? z_lo : z_lo + (z_hi - z_lo) * j / (nz - 1);
      const double v = f(x, z);
      if (v > best.value) best = {v, x, z};
    }
  }
  return best;
}

// Two zoom passes around the lattice maximizer, one lattice cell wide.
double refine(const std::function<double(double, double)>& f, Peak best, double dx,
              double dz, double x_lo, double x_hi, double z_lo, double z_hi) {
  for (int pass = 0; pass < 2; ++pass) {
    const double xa = std::max(x_lo, best.x - dx);
    const double xb = std::min(x_hi, best.x + dx);
    const double za = std::max(z_lo, best.z - dz);
    const double zb = std::min(z_hi, best.z + dz);
    const Peak p = scan(f, xa, xb, 65, za, zb, 65);
    if (p.value > best.value) best = p;
    dx = (xb - xa) / 64.0;
    dz = (zb - za) / 64.0;
  }
  return best.value;
}

void check_sampling(int sampling) {
  if (sampling < 256) throw std::invalid_argument("step bound search: sampling must be >= 256");
}

}  // namespace

double step_bound_limit(const LensGeometry& g, double kappa, int sampling) {
  check_sampling(sampling);
  if (!(kappa > 0.0)) throw std::domain_error("step_bound_limit: kappa must be positive");
  const double r1 = g.aperture;
  const double zext = g.axial_extent;
  auto density = [&](double xi, double zeta) {
    const StretchEvaluation e = stretch_maps(xi, zeta, g);
    return 2.0 * std::abs(gamma_factor(e, kappa) * e.phi);
  };
  const double x_lo = r1 / sampling;
  const double x_hi = r1 * (1.0 - 1.0 / sampling);
  const Peak best = scan(density, x_lo, x_hi, sampling - 1, 0.0, zext, sampling + 1);
  const double dx = (x_hi - x_lo) / (sampling - 2);
  const double dz = zext / sampling;
  return refine(density, best, dx, dz, 1e-12, r1 * (1.0 - 1e-9), 0.0, zext);
}

double step_bound_limit_sampled(const std::function<double(double, double)>& density,
                                double r_lo, double r_hi, double z_lo, double z_hi,
                                int sampling) {
  check_sampling(sampling);
  if (!(r_hi > r_lo) || !(z_hi > z_lo))
    throw std::invalid_argument("step_bound_limit_sampled: empty rectangle");
  const Peak best = scan(density, r_lo, r_hi, sampling + 1, z_lo, z_hi, sampling + 1);
  const double dx = (r_hi - r_lo) / sampling;
  const double dz = (z_hi - z_lo) / sampling;
  return refine(density, best, dx, dz, r_lo, r_hi, z_lo, z_hi);
}

long long max_intervals(const LensGeometry& g, double kappa, int sampling) {
  const double bound = step_bound_limit(g, kappa, sampling);
  if (!(bound > 0.0)) throw NumericalError("max_intervals: degenerate step bound");
  long long m = static_cast<long long>(std::floor(g.aperture / bound));
  while (m > 0 && !(g.aperture / static_cast<double>(m) > bound)) --m;
  return m;
}

std::vector<TaperTableRow> taper_table(double sphere_radius,
                                       std::span<const double> axial_extents,
                                       std::span<const double> kappas, int sampling) {
  if (!(sphere_radius > 0.0))
    throw std::domain_error("taper_table: sphere radius must be positive");
  std::vector<TaperTableRow> rows;
  rows.reserve(axial_extents.size() * kappas.size());
  for (double zext : axial_extents) {
    for (double kappa : kappas) {
      TaperTableRow row;
      row.axial_extent = zext;
      row.kappa = kappa;
      try {
        const double r1 = taper_radius(sphere_radius, zext);
        const LensGeometry g = make_lens_geometry(sphere_radius, zext, r1);
        row.h_limit = step_bound_limit(g, kappa, sampling);
        row.max_m = max_intervals(g, kappa, sampling);
        row.valid = true;
      } catch (const std::domain_error&) {
        row.valid = false;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

SemistabilityReport semistability_check(const TridiagonalMatrix& a) {
  if (a.size() == 0 || a.size() > 512)
    throw std::invalid_argument("semistability_check: dimension out of range");
  const verify::EigenResult eig = verify::dense_eigenvalues(verify::from_tridiagonal(a));
  SemistabilityReport rep;
  rep.converged = eig.converged;
  bool first = true;
  for (const auto& v : eig.values) {
    const double re = v.real();
    if (first || re < rep.min_real) rep.min_real = re;
    if (first || re > rep.max_real) rep.max_real = re;
    first = false;
  }
  rep.semistable = rep.min_real >= -semistability_tolerance;
  return rep;
}

SpectralRadiusEstimate spectral_radius_power(const TridiagonalOperatorPair& pair,
                                             int max_iterations, double rel_tol,
                                             unsigned seed) {
  const std::size_t n = pair.implicit_side.size();
  if (n == 0) throw std::invalid_argument("spectral_radius_power: empty operator");
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> pick(-1.0, 1.0);
  std::vector<std::complex<double>> v(n);
  double nrm = 0.0;
  for (auto& x : v) {
    x = std::complex<double>(pick(rng), pick(rng));
    nrm += std::norm(x);
  }
  nrm = std::sqrt(nrm);
  for (auto& x : v) x /= nrm;

  SpectralRadiusEstimate est;
  double prev = -1.0;
  for (int it = 1; it <= max_iterations; ++it) {
    std::vector<std::complex<double>> w =
        thomas_solve(pair.implicit_side, tridiagonal_multiply(pair.explicit_side, v));
    std::complex<double> rayleigh(0.0, 0.0);
    double wn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      rayleigh += std::conj(v[i]) * w[i];
      wn += std::norm(w[i]);
    }
    wn = std::sqrt(wn);
    est.value = std::abs(rayleigh);
    est.iterations = it;
    if (prev >= 0.0 && std::abs(est.value - prev) <= rel_tol * std::max(est.value, 1e-300)) {
      est.converged = true;
      return est;
    }
    prev = est.value;
    if (wn == 0.0) {
      est.value = 0.0;
      est.converged = true;
      return est;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
  }
  return est;
}

SpectralRadiusEstimate spectral_radius_dense(const TridiagonalOperatorPair& pair) {
  const std::size_t n = pair.implicit_side.size();
  if (n == 0 || n > 512)
    throw std::invalid_argument("spectral_radius_dense: dimension out of range");
  const verify::DenseMatrix b = verify::from_tridiagonal(pair.implicit_side);
  const verify::DenseMatrix c = verify::from_tridiagonal(pair.explicit_side);
  const verify::DenseMatrix e = verify::dense_solve_matrix(b, c);
  const verify::EigenResult eig = verify::dense_eigenvalues(e);
  SpectralRadiusEstimate est;
  est.converged = eig.converged;
  est.iterations = eig.iterations;
  for (const auto& v : eig.values) est.value = std::max(est.value, std::abs(v));
  return est;
}

}
