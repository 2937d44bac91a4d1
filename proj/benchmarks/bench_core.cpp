#include <benchmark/benchmark.h>

#include <numbers>

#include "semimax/quantize.hpp"
#include "semimax/synthesis.hpp"
#include "semimax/transport.hpp"
#include "semimax/wigner.hpp"

using namespace semimax;

namespace {

constexpr double kPi = std::numbers::pi;

Grid line_grid(int n) {
  Grid g;
  g.shape = {1, 1, n};
  g.spacing = {1, 1, 1.0 / n};
  g.periodic = {false, false, true};
  return g;
}

FieldSnapshot bench_field(const Grid& g, double eps) {
  PlaneWaveSpec spec;
  spec.epsilon_scale = eps;
  spec.k0 = Vec3(0, 0, eps * 2 * kPi * 8);
  return plane_wave_field(spec, g, false);
}

}  // namespace

static void BM_Eigensystem(benchmark::State& state) {
  const auto medium = MediumModel::homogeneous(2.0, 1.5);
  const Vec3 x(0.1, -0.4, 0.7);
  const Vec3 k(0.3, 0.9, -1.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eigensystem(medium, x, k));
  }
}
BENCHMARK(BM_Eigensystem);

static void BM_DispersionMatrix(benchmark::State& state) {
  const auto medium = MediumModel::homogeneous(2.0, 1.5);
  const Vec3 x(0.1, -0.4, 0.7);
  const Vec3 k(0.3, 0.9, -1.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dispersion_matrix(medium, x, k));
  }
}
BENCHMARK(BM_DispersionMatrix);

static void BM_WignerProbe(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Grid g = line_grid(4 * (2 * m + 1));
  const auto field = bench_field(g, 1.0 / 16);
  const WindowSpec win{m, 0.1};
  const std::vector<std::array<int, 3>> probes = {{0, 0, g.shape[2] / 2}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        wigner_transform(field, probes, win, {.validate_resolution = false}));
  }
}
BENCHMARK(BM_WignerProbe)->Arg(8)->Arg(16)->Arg(32);

static void BM_ApplyPdoMixed(benchmark::State& state) {
  const Grid g = line_grid(static_cast<int>(state.range(0)));
  const auto field = bench_field(g, 1.0 / 16);
  Symbol mixed;
  mixed.eval = [](const Vec3& x, const Vec3& k) {
    return (1.0 + 0.3 * std::sin(2 * kPi * x[2])) * (1.0 + 0.2 * k[2]);
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_pdo(mixed, field));
  }
}
BENCHMARK(BM_ApplyPdoMixed)->Arg(64)->Arg(128);

static void BM_RayUnitPath(benchmark::State& state) {
  ScalarField eta(
      [](const Vec3& x) {
        const double v = 1.0 + 0.1 * x[2];
        return 1.0 / (v * v);
      },
      [](const Vec3& x) {
        const double v = 1.0 + 0.1 * x[2];
        return Vec3(0, 0, -0.2 / (v * v * v));
      });
  const MediumModel medium(ScalarField::constant(1.0), eta);
  RayState ray;
  ray.x = Vec3(0.1, 0.0, 0.2);
  ray.k = Vec3(0.2, 0.1, 0.9);
  ray.mode = Mode::plus1;
  IntegrationOptions opts;
  opts.dt = 1e-2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_ray(ray, medium, 1.0, opts));
  }
}
BENCHMARK(BM_RayUnitPath);

static void BM_BinEnsemble(benchmark::State& state) {
  std::vector<RayState> rays;
  for (int i = 0; i < 10000; ++i) {
    RayState r;
    r.x = Vec3(0, 0, (i % 100) * 0.01);
    r.k = Vec3(0, 0, 1.0 + (i % 7) * 0.01);
    r.weight = 1e-4;
    rays.push_back(r);
  }
  const auto ens = RayEnsemble::of(std::move(rays));
  PhaseSpaceLattice lat;
  lat.xshape = {1, 1, 32};
  lat.kshape = {1, 1, 16};
  lat.xmin[2] = 0.0;
  lat.kmin[2] = 0.9;
  lat.dx = {1, 1, 1.0 / 32};
  lat.dk = {1, 1, 0.2 / 16};
  for (auto _ : state) {
    benchmark::DoNotOptimize(bin_ensemble(ens, lat));
  }
}
BENCHMARK(BM_BinEnsemble);

BENCHMARK_MAIN();
