// Serial reference vs OpenMP for the ensemble kernels. The second argument
// of each benchmark is 0 for the serial path and 1 for the parallel one.

#include <benchmark/benchmark.h>

#include "riccati/canonical.hpp"
#include "riccati/cocycle.hpp"
#include "riccati/cusp.hpp"
#include "riccati/parallel.hpp"
#include "riccati/presets.hpp"
#include "riccati/srb.hpp"

using namespace riccati;

namespace {

const SurfaceGroup& sphere() {
  static const SurfaceGroup g = load_surface("thrice-punctured-sphere");
  return g;
}

void BM_BasinTest(benchmark::State& state) {
  const Representation rho = Representation::canonical(sphere());
  const auto hs = srb::shipped_observables(sphere());
  const int orbits = static_cast<int>(state.range(0));
  const bool parallel = state.range(1) != 0;
  for (auto _ : state) {
    auto r = srb::basin_test(rho, sphere(), hs, 100.0, orbits, 1, {}, parallel);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * orbits);
  state.counters["workers"] = parallel ? worker_count() : 1;
}
BENCHMARK(BM_BasinTest)->Args({64, 0})->Args({64, 1})->Unit(benchmark::kMillisecond);

void BM_Pushforward(benchmark::State& state) {
  const srb::Grid grid = srb::Grid::for_surface(sphere());
  const auto n = state.range(0);
  const bool parallel = state.range(1) != 0;
  for (auto _ : state) {
    auto m = srb::pushforward_measure(sphere(), canonical::expanding_section, n, grid, 2, parallel);
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Pushforward)->Args({100000, 0})->Args({100000, 1})->Unit(benchmark::kMillisecond);

void BM_Occupation(benchmark::State& state) {
  const Representation rho = Representation::canonical(sphere());
  const srb::Grid grid = srb::Grid::for_surface(sphere());
  const int orbits = static_cast<int>(state.range(0));
  const bool parallel = state.range(1) != 0;
  for (auto _ : state) {
    auto m = srb::occupation_measure(rho, sphere(), orbits, 50.0, 100.0, grid, 3, {}, parallel);
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * orbits);
}
BENCHMARK(BM_Occupation)->Args({64, 0})->Args({64, 1})->Unit(benchmark::kMillisecond);

// Monte-Carlo estimate of the cusp integral split into independent seeded
// chunks, mapped serially or in parallel.
void BM_CuspMonteCarlo(benchmark::State& state) {
  const auto spec = cusp::MonodromySpec::hyperbolic(2, 3.0);
  const bool parallel = state.range(1) != 0;
  const std::int64_t chunks = state.range(0);
  auto chunk = [&](std::int64_t i) { return cusp::monte_carlo_integral(spec, 1e-3, 20000, derive_seed(4, i)).mean; };
  for (auto _ : state) {
    auto means = parallel ? parallel_map(chunks, chunk) : serial_map(chunks, chunk);
    benchmark::DoNotOptimize(means);
  }
  state.SetItemsProcessed(state.iterations() * chunks * 20000);
}
BENCHMARK(BM_CuspMonteCarlo)->Args({16, 0})->Args({16, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
