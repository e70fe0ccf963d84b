#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "parax/geometry.hpp"
#include "parax/physics.hpp"
#include "parax/scheme.hpp"
#include "parax/stability.hpp"
#include "parax/verify.hpp"

namespace {

using namespace parax;

const LensGeometry& published_geometry() {
  static const LensGeometry g = make_lens_geometry(1.969, 0.7643, 1.5574);
  return g;
}
constexpr double published_kappa = 9975.43;

std::vector<std::complex<double>> random_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> pick(-1.0, 1.0);
  std::vector<std::complex<double>> v(n);
  for (auto& x : v) x = std::complex<double>(pick(rng), pick(rng));
  return v;
}

TridiagonalOperatorPair lens_pair_at(int m, double zeta_half) {
  const LensGeometry& g = published_geometry();
  const GridSpec grid = make_grid(m, 16000, g.aperture, g.axial_extent);
  std::vector<PdeCoefficients> coeffs(m + 1);
  for (int i = 0; i <= m; ++i)
    coeffs[i] = lens_coefficients(i * grid.h(), zeta_half, g, published_kappa);
  return assemble_pair(coeffs, grid);
}

void bm_thomas_solve(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const GridSpec grid = make_grid(m, 1024, 6.0, 1.0);
  std::vector<PdeCoefficients> coeffs(m + 1);
  for (int i = 0; i <= m; ++i) coeffs[i] = homogeneous_coefficients(i * grid.h(), 40.0);
  const TridiagonalOperatorPair pair = assemble_pair(coeffs, grid);
  const std::vector<std::complex<double>> rhs = random_vector(m + 1, 7u);
  for (auto _ : state) {
    benchmark::DoNotOptimize(thomas_solve(pair.implicit_side, rhs));
  }
  state.SetComplexityN(m);
}
BENCHMARK(bm_thomas_solve)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void bm_lens_step(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const LensGeometry& g = published_geometry();
  const GridSpec grid = make_grid(m, 16000, g.aperture, g.axial_extent);
  std::vector<std::complex<double>> u = random_vector(m + 1, 11u);
  std::vector<PdeCoefficients> coeffs(m + 1);
  for (auto _ : state) {
    // one full propagation step including the per-step assembly
    for (int i = 0; i <= m; ++i)
      coeffs[i] = lens_coefficients(i * grid.h(), 0.5 * grid.tau(), g, published_kappa);
    const TridiagonalOperatorPair pair = assemble_pair(coeffs, grid);
    u = parax::advance(pair, u);
    benchmark::DoNotOptimize(u.data());
  }
}
BENCHMARK(bm_lens_step)->Arg(1024)->Arg(5000);

void bm_step_bound_search(benchmark::State& state) {
  const int sampling = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_bound_limit(published_geometry(), published_kappa, sampling));
  }
}
BENCHMARK(bm_step_bound_search)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void bm_dense_spectral_radius(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const TridiagonalOperatorPair pair = lens_pair_at(m, 0.5 * 0.7643 / 16000.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_radius_dense(pair));
  }
  state.SetComplexityN(m);
}
BENCHMARK(bm_dense_spectral_radius)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void bm_power_spectral_radius(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const TridiagonalOperatorPair pair = lens_pair_at(m, 0.5 * 0.7643 / 16000.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_radius_power(pair));
  }
}
BENCHMARK(bm_power_spectral_radius)->Arg(256)->Arg(1024)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
