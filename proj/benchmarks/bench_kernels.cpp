#include <benchmark/benchmark.h>

#include <lltf/kernels.hpp>

namespace {

// single-orbital potential at one off-center point, by channel index
void BM_SinglePotential(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    double v = lltf::v_single(m, 10.0, 0.7);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_SinglePotential)->Arg(0)->Arg(4)->Arg(16);

// pair kernel at one separation, by channel pair
void BM_PairPotential(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    double v = lltf::v_pair(m, m, 10.0, 0.7);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_PairPotential)->Arg(0)->Arg(4)->Arg(16);

// full table build (cold, cache bypassed), by grid size
void BM_TableBuild(benchmark::State& state) {
  const std::size_t nz = static_cast<std::size_t>(state.range(0));
  lltf::KernelOptions ko;
  ko.cache_dir = "off";  // time the quadrature, not the disk
  for (auto _ : state) {
    auto K = lltf::build_kernel_table(3.0, 2, lltf::UniformGrid(4.0, nz), ko);
    benchmark::DoNotOptimize(K.single_at(0, 0));
  }
}
BENCHMARK(BM_TableBuild)->Arg(31)->Arg(61)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
