#include "parax/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "parax/errors.hpp"

namespace parax::verify {
namespace {

using cld = std::complex<long double>;

constexpr int solve_dimension_limit = 2048;
constexpr int eigen_dimension_limit = 512;

std::vector<cld> widen(const DenseMatrix& a) {
  std::vector<cld> w(a.a.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = cld(a.a[i].real(), a.a[i].imag());
  return w;
}

// LU with partial pivoting in place; perm holds the row order.
void lu_factor(std::vector<cld>& m, std::vector<int>& perm, int n) {
  perm.resize(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    long double best = std::abs(m[static_cast<std::size_t>(perm[k]) * n + k]);
    for (int i = k + 1; i < n; ++i) {
      long double cand = std::abs(m[static_cast<std::size_t>(perm[i]) * n + k]);
      if (cand > best) {
        best = cand;
        pivot = i;
      }
    }
    if (best == 0.0L) throw NumericalError("dense_solve: singular matrix");
    std::swap(perm[k], perm[pivot]);
    const std::size_t rk = static_cast<std::size_t>(perm[k]) * n;
    const cld pk = m[rk + k];
    for (int i = k + 1; i < n; ++i) {
      const std::size_t ri = static_cast<std::size_t>(perm[i]) * n;
      const cld f = m[ri + k] / pk;
      m[ri + k] = f;
      for (int j = k + 1; j < n; ++j) m[ri + j] -= f * m[rk + j];
    }
  }
}

void lu_solve_one(const std::vector<cld>& m, const std::vector<int>& perm, int n,
                  std::vector<cld>& x) {
  std::vector<cld> y(n);
  for (int i = 0; i < n; ++i) {
    cld s = x[perm[i]];
    const std::size_t ri = static_cast<std::size_t>(perm[i]) * n;
    for (int j = 0; j < i; ++j) s -= m[ri + j] * y[j];
    y[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    cld s = y[i];
    const std::size_t ri = static_cast<std::size_t>(perm[i]) * n;
    for (int j = i + 1; j < n; ++j) s -= m[ri + j] * x[j];
    x[i] = s / m[ri + i];
  }
}

// Diagonal similarity scaling to even out row and column norms.
void balance(std::vector<cld>& a, int n) {
  const long double radix = 2.0L;
  const long double radix2 = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < n; ++i) {
      long double r = 0.0L, c = 0.0L;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a[static_cast<std::size_t>(j) * n + i]);
        r += std::abs(a[static_cast<std::size_t>(i) * n + j]);
      }
      if (c == 0.0L || r == 0.0L) continue;
      long double g = r / radix;
      long double f = 1.0L;
      const long double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix2;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix2;
      }
      if ((c + r) / f < 0.95L * s) {
        done = false;
        const long double ginv = 1.0L / f;
        for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] *= ginv;
        for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(j) * n + i] *= f;
      }
    }
  }
}

void hessenberg(std::vector<cld>& a, int n) {
  std::vector<cld> v(n), w(n);
  for (int k = 0; k + 2 < n; ++k) {
    long double xnorm = 0.0L;
    for (int i = k + 1; i < n; ++i) xnorm += std::norm(a[static_cast<std::size_t>(i) * n + k]);
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0L) continue;
    const cld x0 = a[static_cast<std::size_t>(k + 1) * n + k];
    const long double ax0 = std::abs(x0);
    const cld phase = ax0 == 0.0L ? cld(1.0L, 0.0L) : x0 / ax0;
    const cld alpha = -phase * xnorm;
    long double vnorm = 0.0L;
    for (int i = 0; i < n; ++i) v[i] = cld(0.0L, 0.0L);
    for (int i = k + 1; i < n; ++i) v[i] = a[static_cast<std::size_t>(i) * n + k];
    v[k + 1] -= alpha;
    for (int i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
    vnorm = std::sqrt(vnorm);
    if (vnorm < std::numeric_limits<long double>::min()) continue;
    for (int i = k + 1; i < n; ++i) v[i] /= vnorm;
    // rows: A <- A - 2 v (v* A)
    for (int j = k; j < n; ++j) {
      cld s(0.0L, 0.0L);
      for (int i = k + 1; i < n; ++i) s += std::conj(v[i]) * a[static_cast<std::size_t>(i) * n + j];
      w[j] = s;
    }
    for (int i = k + 1; i < n; ++i) {
      const std::size_t ri = static_cast<std::size_t>(i) * n;
      for (int j = k; j < n; ++j) a[ri + j] -= 2.0L * v[i] * w[j];
    }
    // columns: A <- A - 2 (A v) v*
    for (int i = 0; i < n; ++i) {
      cld s(0.0L, 0.0L);
      const std::size_t ri = static_cast<std::size_t>(i) * n;
      for (int j = k + 1; j < n; ++j) s += a[ri + j] * v[j];
      w[i] = s;
    }
    for (int i = 0; i < n; ++i) {
      const std::size_t ri = static_cast<std::size_t>(i) * n;
      for (int j = k + 1; j < n; ++j) a[ri + j] -= 2.0L * w[i] * std::conj(v[j]);
    }
    a[static_cast<std::size_t>(k + 1) * n + k] = alpha;
    for (int i = k + 2; i < n; ++i) a[static_cast<std::size_t>(i) * n + k] = cld(0.0L, 0.0L);
  }
}

struct Rotation {
  long double c = 1.0L;
  cld s{0.0L, 0.0L};
};

Rotation make_rotation(const cld& x, const cld& y) {
  Rotation g;
  const long double ax = std::abs(x);
  const long double ay = std::abs(y);
  if (ay == 0.0L) return g;
  const long double r = std::hypot(ax, ay);
  if (ax == 0.0L) {
    g.c = 0.0L;
    g.s = std::conj(y) / ay;
    return g;
  }
  g.c = ax / r;
  g.s = (x / ax) * std::conj(y) / r;
  return g;
}

// Shifted QR on an upper Hessenberg matrix; eigenvalues land on the diagonal.
bool qr_eigenvalues(std::vector<cld>& h, int n, std::vector<cld>& out, int& sweeps) {
  const long double eps = std::numeric_limits<long double>::epsilon();
  out.assign(n, cld(0.0L, 0.0L));
  long double anorm = 0.0L;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - 1); j < n; ++j)
      anorm += std::abs(h[static_cast<std::size_t>(i) * n + j]);
  if (anorm == 0.0L) anorm = 1.0L;
  auto at = [&](int i, int j) -> cld& { return h[static_cast<std::size_t>(i) * n + j]; };
  int hi = n - 1;
  int local = 0;
  bool ok = true;
  sweeps = 0;
  while (hi >= 0) {
    int lo = hi;
    while (lo > 0) {
      long double s = std::abs(at(lo - 1, lo - 1)) + std::abs(at(lo, lo));
      if (s == 0.0L) s = anorm;
      if (std::abs(at(lo, lo - 1)) <= eps * s) {
        at(lo, lo - 1) = cld(0.0L, 0.0L);
        break;
      }
      --lo;
    }
    if (lo == hi) {
      out[hi] = at(hi, hi);
      --hi;
      local = 0;
      continue;
    }
    if (++local > 60) {
      // give up on this block; report the diagonal as the best estimate
      ok = false;
      for (int i = lo; i <= hi; ++i) out[i] = at(i, i);
      hi = lo - 1;
      local = 0;
      continue;
    }
    ++sweeps;
    cld shift;
    if (local % 12 == 0) {
      shift = cld(std::abs(at(hi, hi - 1)) + (hi - 1 > lo ? std::abs(at(hi - 1, hi - 2)) : 0.0L),
                  0.0L) +
              at(hi, hi);
    } else {
      const cld a11 = at(hi - 1, hi - 1), a12 = at(hi - 1, hi);
      const cld a21 = at(hi, hi - 1), a22 = at(hi, hi);
      const cld half = (a11 - a22) / 2.0L;
      const cld disc = std::sqrt(half * half + a12 * a21);
      const cld d1 = half + disc, d2 = half - disc;
      shift = a22 + (std::abs(d1) <= std::abs(d2) ? d1 : d2);
    }
    for (int i = lo; i <= hi; ++i) at(i, i) -= shift;
    std::vector<Rotation> rot(hi - lo);
    for (int i = lo; i < hi; ++i) {
      Rotation g = make_rotation(at(i, i), at(i + 1, i));
      rot[i - lo] = g;
      for (int j = i; j <= hi; ++j) {
        const cld u = at(i, j), v = at(i + 1, j);
        at(i, j) = g.c * u + g.s * v;
        at(i + 1, j) = -std::conj(g.s) * u + g.c * v;
      }
    }
    for (int i = lo; i < hi; ++i) {
      const Rotation& g = rot[i - lo];
      const int top = std::min(i + 1, hi);
      for (int row = lo; row <= top; ++row) {
        const cld u = at(row, i), v = at(row, i + 1);
        at(row, i) = g.c * u + std::conj(g.s) * v;
        at(row, i + 1) = -g.s * u + g.c * v;
      }
    }
    for (int i = lo; i <= hi; ++i) at(i, i) += shift;
  }
  return ok;
}

}  // namespace

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

DenseMatrix from_tridiagonal(const TridiagonalMatrix& t) {
  const int n = static_cast<int>(t.size());
  DenseMatrix m(n);
  for (int i = 0; i < n; ++i) {
    m.at(i, i) = t.diag[i];
    if (i + 1 < n) {
      m.at(i, i + 1) = t.super[i];
      m.at(i + 1, i) = t.sub[i];
    }
  }
  return m;
}

std::vector<std::complex<double>> dense_solve(const DenseMatrix& a,
                                              std::span<const std::complex<double>> b) {
  if (a.n <= 0 || a.n > solve_dimension_limit)
    throw std::invalid_argument("dense_solve: dimension out of range");
  if (static_cast<int>(b.size()) != a.n)
    throw std::invalid_argument("dense_solve: right-hand side size mismatch");
  std::vector<cld> m = widen(a);
  std::vector<int> perm;
  lu_factor(m, perm, a.n);
  std::vector<cld> x(a.n);
  for (int i = 0; i < a.n; ++i) x[i] = cld(b[i].real(), b[i].imag());
  lu_solve_one(m, perm, a.n, x);
  std::vector<std::complex<double>> out(a.n);
  for (int i = 0; i < a.n; ++i)
    out[i] = std::complex<double>(static_cast<double>(x[i].real()),
                                  static_cast<double>(x[i].imag()));
  return out;
}

DenseMatrix dense_solve_matrix(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.n <= 0 || a.n > solve_dimension_limit)
    throw std::invalid_argument("dense_solve_matrix: dimension out of range");
  if (b.n != a.n) throw std::invalid_argument("dense_solve_matrix: size mismatch");
  std::vector<cld> m = widen(a);
  std::vector<int> perm;
  lu_factor(m, perm, a.n);
  DenseMatrix x(a.n);
  std::vector<cld> col(a.n);
  for (int j = 0; j < a.n; ++j) {
    for (int i = 0; i < a.n; ++i) {
      const std::complex<double>& v = b.at(i, j);
      col[i] = cld(v.real(), v.imag());
    }
    lu_solve_one(m, perm, a.n, col);
    for (int i = 0; i < a.n; ++i)
      x.at(i, j) = std::complex<double>(static_cast<double>(col[i].real()),
                                        static_cast<double>(col[i].imag()));
  }
  return x;
}

EigenResult dense_eigenvalues(const DenseMatrix& a) {
  if (a.n <= 0 || a.n > eigen_dimension_limit)
    throw std::invalid_argument("dense_eigenvalues: dimension out of range");
  std::vector<cld> m = widen(a);
  balance(m, a.n);
  hessenberg(m, a.n);
  std::vector<cld> vals;
  EigenResult res;
  res.converged = qr_eigenvalues(m, a.n, vals, res.iterations);
  res.values.resize(a.n);
  for (int i = 0; i < a.n; ++i)
    res.values[i] = std::complex<double>(static_cast<double>(vals[i].real()),
                                         static_cast<double>(vals[i].imag()));
  return res;
}

std::vector<std::array<double, 2>> interior_map_lattice(const LensGeometry& g,
                                                        int radial_samples,
                                                        int axial_samples) {
  if (radial_samples < 2 || axial_samples < 2)
    throw std::invalid_argument("interior_map_lattice: need at least 2 samples per axis");
  std::vector<std::array<double, 2>> pts;
  pts.reserve(static_cast<std::size_t>(radial_samples) * axial_samples);
  for (int i = 0; i < radial_samples; ++i) {
    const double fx = 0.05 + 0.90 * i / (radial_samples - 1);
    for (int j = 0; j < axial_samples; ++j) {
      const double fz = 0.05 + 0.90 * j / (axial_samples - 1);
      pts.push_back({fx * g.aperture, fz * g.axial_extent});
    }
  }
  return pts;
}

MapCheckReport map_derivative_check(const LensGeometry& g,
                                    std::span<const std::array<double, 2>> points,
                                    double delta) {
  if (!(delta > 0.0) || !(delta < 1e-2))
    throw std::invalid_argument("map_derivative_check: delta out of range");
  MapCheckReport rep;
  const long double R = g.sphere_radius;
  const long double Z = g.axial_extent;
  const long double dxi = static_cast<long double>(delta) * g.aperture;
  const long double dz = static_cast<long double>(delta) * g.axial_extent;
  // forward map in extended precision; even in xi, so probing across the axis
  // needs no special casing
  auto zf = [&](long double xi, long double z) {
    const long double s = std::sqrt(R * R - xi * xi);
    return (z - R + s) / (Z - R + s) * Z;
  };
  auto richardson = [](long double coarse, long double fine) {
    return (4.0L * fine - coarse) / 3.0L;
  };
  auto rel = [](long double fd, double exact) {
    return static_cast<double>(std::abs(fd - static_cast<long double>(exact)) /
                               std::max(std::abs(static_cast<long double>(exact)), 1e-12L));
  };
  for (const auto& p : points) {
    const double xi = p[0], zeta = p[1];
    const long double z = z_inverse(xi, zeta, g);
    const StretchEvaluation e = stretch_maps(xi, zeta, g);

    auto d_phi = [&](long double d) { return (zf(xi + d, z) - zf(xi - d, z)) / (2.0L * d); };
    const long double phi_fd = richardson(d_phi(dxi), d_phi(dxi / 2.0L));

    auto d_psi = [&](long double d) {
      return (zf(xi + d, z) - 2.0L * zf(xi, z) + zf(xi - d, z)) / (d * d);
    };
    const long double psi_fd = richardson(d_psi(dxi), d_psi(dxi / 2.0L));

    auto d_theta = [&](long double d) {
      return (zf(xi, z + d) - zf(xi, z - d)) / (2.0L * d);
    };
    const long double theta_fd = richardson(d_theta(dz), d_theta(dz / 2.0L));

    rep.max_phi_rel = std::max(rep.max_phi_rel, rel(phi_fd, e.phi));
    rep.max_psi_rel = std::max(rep.max_psi_rel, rel(psi_fd, e.psi));
    rep.max_theta_rel = std::max(rep.max_theta_rel, rel(theta_fd, e.theta));
    rep.max_variant_psi_rel =
        std::max(rep.max_variant_psi_rel, rel(psi_fd, psi_closed_form_variant(xi, zeta, g)));
    ++rep.points;
  }
  return rep;
}

std::vector<ConvergenceRow> truncation_order_study(
    const ManufacturedField& w,
    const std::function<PdeCoefficients(double, double)>& coefficients,
    double r_lo, double r_hi, double z_lo, double z_hi, int r_samples,
    int z_samples, double base_h, double sigma, int levels) {
  if (levels < 2) throw std::invalid_argument("truncation_order_study: need >= 2 levels");
  if (r_samples < 2 || z_samples < 2)
    throw std::invalid_argument("truncation_order_study: need >= 2 samples per axis");
  if (!(base_h > 0.0) || !(sigma > 0.0))
    throw std::invalid_argument("truncation_order_study: base_h and sigma must be positive");
  std::vector<ConvergenceRow> rows;
  rows.reserve(levels);
  for (int level = 0; level < levels; ++level) {
    const double h = base_h / static_cast<double>(1 << level);
    const double tau = sigma * h;
    double worst = 0.0;
    for (int i = 0; i < r_samples; ++i) {
      const double r = r_lo + (r_hi - r_lo) * i / (r_samples - 1);
      for (int j = 0; j < z_samples; ++j) {
        const double zc = z_lo + (z_hi - z_lo) * j / (z_samples - 1);
        const PdeCoefficients c = coefficients(r, zc);
        const StencilRow row = row_coefficients(c, h, tau, RowKind::interior);
        const double zn = zc + tau / 2.0;
        const double zo = zc - tau / 2.0;
        const std::complex<double> numeric =
            row.new_upper * w.value(r + h, zn) + row.new_center * w.value(r, zn) +
            row.new_lower * w.value(r - h, zn) - row.old_upper * w.value(r + h, zo) -
            row.old_center * w.value(r, zo) - row.old_lower * w.value(r - h, zo) + c.c0;
        const std::complex<double> exact = c.c5 * w.drz(r, zc) + c.c4 * w.drr(r, zc) +
                                           c.c3 * w.dr(r, zc) + c.c2 * w.dz(r, zc) +
                                           c.c1 * w.value(r, zc) + c.c0;
        worst = std::max(worst, std::abs(numeric - exact));
      }
    }
    ConvergenceRow out{h, tau, worst, 0.0};
    if (level > 0 && worst > 0.0) out.order = std::log2(rows.back().error / worst);
    rows.push_back(out);
  }
  return rows;
}

std::complex<double> free_space_reference(double r, double z, const GaussianSource& src,
                                          double k) {
  using namespace std::complex_literals;
  if (!(src.waist > 0.0)) throw std::domain_error("free_space_reference: waist must be positive");
  if (!(k > 0.0)) throw std::domain_error("free_space_reference: wave number must be positive");
  const std::complex<double> q =
      1.0 / (src.waist * src.waist) + 1i * k / (2.0 * src.emitter_z);
  const std::complex<double> vt = 2.0 * z * q / k;
  const std::complex<double> p = 1.0 - 1i * vt;
  const std::complex<double> amp = std::exp(1i * k * src.emitter_z);
  return amp / p * std::exp(-r * r * q / p);
}

std::vector<ConvergenceRow> free_space_convergence(const GaussianSource& src, double k,
                                                   double radial_extent,
                                                   double axial_length, int base_m,
                                                   int base_n, int levels) {
  if (levels < 1) throw std::invalid_argument("free_space_convergence: need >= 1 level");
  if (base_m < 8 || base_n < 1)
    throw std::invalid_argument("free_space_convergence: grid too small");
  std::vector<ConvergenceRow> rows;
  rows.reserve(levels);
  for (int level = 0; level < levels; ++level) {
    const int m = base_m << level;
    const int n = base_n << level;
    const GridSpec grid = make_grid(m, n, radial_extent, axial_length);
    std::vector<PdeCoefficients> coeffs(m + 1);
    for (int i = 0; i <= m; ++i) coeffs[i] = homogeneous_coefficients(i * grid.h(), k);
    const TridiagonalOperatorPair pair = assemble_pair(coeffs, grid);
    std::vector<std::complex<double>> u(m + 1);
    double edge = 0.0, peak = 0.0;
    for (int i = 0; i <= m; ++i) {
      u[i] = free_space_reference(i * grid.h(), 0.0, src, k);
      peak = std::max(peak, std::abs(u[i]));
    }
    // The mirror boundary is harmless when the field has either decayed or
    // gone flat at the rim; a locally constant beam satisfies it exactly.
    edge = std::min(std::abs(u[m]), std::abs(u[m] - u[m - 1]));
    if (edge > 1e-8 * peak)
      throw std::invalid_argument(
          "free_space_convergence: radial extent too small for the source");
    for (int step = 0; step < n; ++step) u = parax::advance(pair, u);
    double err2 = 0.0, ref2 = 0.0;
    for (int i = 0; i <= m; ++i) {
      const std::complex<double> ref = free_space_reference(i * grid.h(), axial_length, src, k);
      err2 += std::norm(u[i] - ref);
      ref2 += std::norm(ref);
    }
    if (!(ref2 > 0.0)) throw NumericalError("free_space_convergence: vanishing reference");
    ConvergenceRow out{grid.h(), grid.tau(), std::sqrt(err2 / ref2), 0.0};
    if (level > 0 && out.error > 0.0) out.order = std::log2(rows.back().error / out.error);
    rows.push_back(out);
  }
  return rows;
}

}
