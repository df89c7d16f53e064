#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "rydres/dynamics.hpp"
#include "rydres/model.hpp"
#include "rydres/pipeline.hpp"
#include "rydres/rng.hpp"

using namespace rydres;

namespace {

ModelParams reference_params() {
    ModelParams p;
    p.omega = 1.1;
    p.delta = 11.0;
    p.gamma_d = 10.0;
    p.v = 100.0;
    p.d = 1e-4;
    return p;
}

void BM_drift(benchmark::State& state) {
    const ModelParams p = reference_params();
    double n = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(n = 0.1 + 1e-6 * drift(n, p));
    }
}
BENCHMARK(BM_drift);

void BM_stationary_states(benchmark::State& state) {
    ModelParams p = reference_params();
    p.omega = 1.21;
    p.delta = 11.45;  // bistable point, three roots
    for (auto _ : state) {
        benchmark::DoNotOptimize(stationary_states(p));
    }
}
BENCHMARK(BM_stationary_states);

void BM_integrate_sde(benchmark::State& state) {
    const ModelParams p = reference_params();
    DriveSchedule schedule;
    schedule.hold_time = 20.0;
    schedule.delta = 11.0;
    const auto symbols = static_cast<std::size_t>(state.range(0));
    for (std::size_t i = 0; i < symbols; ++i)
        schedule.omega_values.push_back(1.1 + 0.11 * 0.5 * (1.0 + std::sin(0.7 * i)));
    TrajectoryConfig cfg;
    cfg.n0 = 0.05;
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_sde(schedule, p, cfg));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(symbols) * 200);
}
BENCHMARK(BM_integrate_sde)->Arg(100)->Arg(1000);

void BM_normal_draws(benchmark::State& state) {
    CounterRng rng(1, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng.normal());
    }
}
BENCHMARK(BM_normal_draws);

void BM_savitzky_golay(benchmark::State& state) {
    std::vector<double> series(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < series.size(); ++i) series[i] = std::sin(0.01 * i);
    for (auto _ : state) {
        benchmark::DoNotOptimize(savitzky_golay(series, {10, 3}));
    }
}
BENCHMARK(BM_savitzky_golay)->Arg(16000);

void BM_fit_readout(benchmark::State& state) {
    const auto n = state.range(0);
    const auto m = state.range(1);
    WindowedDataset ds;
    ds.m = static_cast<int>(m);
    ds.subseries_index = 1;
    ds.windows.resize(n, m);
    ds.targets.resize(n);
    CounterRng rng(3, 0);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < m; ++c) ds.windows(r, c) = rng.normal();
        ds.targets(r) = rng.normal();
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_readout(ds, 0.0));
    }
}
BENCHMARK(BM_fit_readout)->Args({420, 200});

}  // namespace

BENCHMARK_MAIN();
