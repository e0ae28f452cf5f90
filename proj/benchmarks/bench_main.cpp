#include <benchmark/benchmark.h>
#include "wanewave/model.hpp"

static void BM_EndemicEquilibrium(benchmark::State& state) {
    auto p = wanewave::ModelParams::pertussis().with_nu(3.2).with_tau(4.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(wanewave::endemic_equilibrium(p));
}
BENCHMARK(BM_EndemicEquilibrium);

BENCHMARK_MAIN();
