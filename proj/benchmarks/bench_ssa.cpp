#include <benchmark/benchmark.h>

#include "windcast/ssa.hpp"
#include "windcast/synthetic.hpp"

using namespace windcast;

static TimeSeries bench_series(std::size_t n) {
    SyntheticConfig config;
    config.n = n;
    config.seed = 3;
    return generate_synthetic(config);
}

static void BM_Decompose(benchmark::State& state) {
    const TimeSeries ts = bench_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(decompose(ts, 15));
    }
}
BENCHMARK(BM_Decompose)->Arg(500)->Arg(1000)->Arg(2880);

static void BM_SsaDenoise(benchmark::State& state) {
    const TimeSeries ts = bench_series(static_cast<std::size_t>(state.range(0)));
    const SsaConfig config{15, 0.99};
    for (auto _ : state) {
        benchmark::DoNotOptimize(ssa_denoise(ts, config));
    }
}
BENCHMARK(BM_SsaDenoise)->Arg(1000)->Arg(2880);

static void BM_DiagonalAverage(benchmark::State& state) {
    const TimeSeries ts = bench_series(2880);
    const TrajectoryMatrix traj = embed(ts, 15);
    for (auto _ : state) {
        benchmark::DoNotOptimize(diagonal_average(traj));
    }
}
BENCHMARK(BM_DiagonalAverage);

BENCHMARK_MAIN();
