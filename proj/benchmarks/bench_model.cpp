#include <benchmark/benchmark.h>

#include "windcast/model.hpp"
#include "windcast/rng.hpp"
#include "windcast/train.hpp"

using namespace windcast;

static std::vector<double> bench_window(std::size_t n) {
    Rng rng(17);
    std::vector<double> window(n);
    for (double& v : window) v = rng.uniform(-1, 1);
    return window;
}

static void BM_TcnGruForward(benchmark::State& state) {
    NetConfig config;
    TcnGruNet net(config, 1);
    const auto window = bench_window(config.window_dim);
    for (auto _ : state) {
        benchmark::DoNotOptimize(net.forward(window));
    }
}
BENCHMARK(BM_TcnGruForward);

static void BM_TcnGruForwardBackward(benchmark::State& state) {
    NetConfig config;
    TcnGruNet net(config, 1);
    const auto window = bench_window(config.window_dim);
    for (auto _ : state) {
        const double pred = net.forward(window);
        net.backward(2.0 * (pred - 0.5));
        benchmark::DoNotOptimize(net.parameters().front()->grad.data[0]);
        net.zero_grads();
    }
}
BENCHMARK(BM_TcnGruForwardBackward);

static void BM_FitEpoch(benchmark::State& state) {
    NetConfig net_config;
    net_config.window_dim = 20;
    TimeSeries ts;
    Rng rng(5);
    for (int i = 0; i < 500; ++i) ts.values.push_back(rng.uniform(-1, 1));
    const WindowedDataset ds = make_windows(ts, 20, 1, {1});
    TrainConfig config;
    config.epochs = 1;
    for (auto _ : state) {
        TcnGruNet net(net_config, 2);
        benchmark::DoNotOptimize(fit(net, ds, 0, config));
    }
}
BENCHMARK(BM_FitEpoch);
