#include "besselhardy/kernels.hpp"
#include "besselhardy/product_ops.hpp"
#include "besselhardy/singular.hpp"
#include "besselhardy/specfun.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace bh;

static void BM_BesselJ(benchmark::State& st) {
  const double nu = static_cast<double>(st.range(0)) / 2;
  double x = 0.1, s = 0.0;
  for (auto _ : st) {
    s += specfun::bessel_j(nu, x);
    x = x < 40 ? x * 1.07 : 0.1;
  }
  benchmark::DoNotOptimize(s);
}
BENCHMARK(BM_BesselJ)->Arg(1)->Arg(2)->Arg(3)->Arg(5);

static void BM_BesselIScaled(benchmark::State& st) {
  double u = 1e-4, s = 0.0;
  for (auto _ : st) {
    s += specfun::bessel_i_scaled(1.5, u);
    u = u < 1e4 ? u * 1.3 : 1e-4;
  }
  benchmark::DoNotOptimize(s);
}
BENCHMARK(BM_BesselIScaled);

static void BM_PoissonSubordination(benchmark::State& st) {
  const BesselParams p(2.0);
  double x = 0.2, s = 0.0;
  for (auto _ : st) {
    s += poisson_kernel_subordination(p, {}, 0.5, x, 1.3);
    x = x < 5 ? x + 0.37 : 0.2;
  }
  benchmark::DoNotOptimize(s);
}
BENCHMARK(BM_PoissonSubordination);

static void BM_HankelMatrix(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const HalfLineGrid g = HalfLineGrid::uniform(16.0 / n, 16.0, n);
  for (auto _ : st) {
    const SpectralCalculus sc(BesselParams(1.5), g);
    benchmark::DoNotOptimize(sc.kernel(0).data());
  }
}
BENCHMARK(BM_HankelMatrix)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_HilbertOddMatrix(benchmark::State& st) {
  const HalfLineGrid g = HalfLineGrid::uniform(0.0625, 16.0, 256);
  for (auto _ : st) benchmark::DoNotOptimize(hilbert_odd_matrix(g).data());
}
BENCHMARK(BM_HilbertOddMatrix)->Unit(benchmark::kMillisecond);

// one pass over the product scale lattice
static void BM_FrameSweep(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const HalfLineGrid g = HalfLineGrid::uniform(8.0 / n, 8.0, n);
  const auto f = SampledFunction2D::sample(g, g, [](double x, double y) {
    return x * y * std::exp(-(x - 2) * (x - 2) - (y - 3) * (y - 3));
  });
  const ConeParams cone{1.0, 1.0 / 16, 4.0, 2};
  ProductOperators ops(BesselParams(2.0), g, g);
  for (auto _ : st) benchmark::DoNotOptimize(frame_functions(ops, f, cone).S.data());
}
BENCHMARK(BM_FrameSweep)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
