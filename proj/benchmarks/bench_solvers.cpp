#include <benchmark/benchmark.h>

#include <lltf/dstf.hpp>
#include <lltf/kernels.hpp>
#include <lltf/spectral1d.hpp>

#include <cmath>
#include <lltf/stf.hpp>

namespace {

const lltf::KernelTable& table() {
  static auto K = lltf::build_kernel_table(3.0, 2, lltf::UniformGrid(6.0, 121));
  return K;
}

// radial semiclassical solve near neutrality, by grid size
void BM_StfSolve(benchmark::State& state) {
  lltf::StfOptions o;
  o.points = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto r = lltf::solve_stf(2.0, 1.0, 1.5, o);
    benchmark::DoNotOptimize(r.nu);
  }
}
BENCHMARK(BM_StfSolve)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

// coupled channel solve at fixed mass on a cached table
void BM_DstfSolve(benchmark::State& state) {
  const auto& K = table();
  for (auto _ : state) {
    auto r = lltf::solve_dstf(2.0, 3.0, 1.0, K);
    benchmark::DoNotOptimize(r.mu);
  }
}
BENCHMARK(BM_DstfSolve)->Unit(benchmark::kMillisecond);

// longitudinal spectrum of a soft Coulomb well below zero
void BM_SpectrumBelow(benchmark::State& state) {
  auto V = [](double z) { return -2.0 / std::sqrt(1.0 + z * z); };
  for (auto _ : state) {
    auto r = lltf::spectrum_below(V, 0.0);
    benchmark::DoNotOptimize(r.sum);
  }
}
BENCHMARK(BM_SpectrumBelow)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
