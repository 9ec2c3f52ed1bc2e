// Serial reference vs OpenMP kernels on the two-link model.
#include "jla/parallel.hpp"
#include "jla/scenario.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace jla;

namespace {

const Scenario& two_link() {
    static const Scenario s = resolve(preset("two-link-constant"));
    return s;
}

StateBatch random_transformed(Eigen::Index n, Eigen::Index cols) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    StateBatch b{Mat(n, cols), Mat(n, cols)};
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            b.a(i, j) = u(rng);
            b.b(i, j) = u(rng);
        }
    }
    return b;
}

void BM_ForwardSerial(benchmark::State& state) {
    const auto& lim = two_link().limits;
    const StateBatch in = random_transformed(lim.size(), state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(batch_forward_map(in, lim));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ForwardOmp(benchmark::State& state) {
    const auto& lim = two_link().limits;
    const StateBatch in = random_transformed(lim.size(), state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(batch_forward_map_omp(in, lim));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BackwardSerial(benchmark::State& state) {
    const auto& lim = two_link().limits;
    const StateBatch in = batch_forward_map(random_transformed(lim.size(), state.range(0)), lim);
    for (auto _ : state) benchmark::DoNotOptimize(batch_backward_map(in, lim));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BackwardOmp(benchmark::State& state) {
    const auto& lim = two_link().limits;
    const StateBatch in = batch_forward_map(random_transformed(lim.size(), state.range(0)), lim);
    for (auto _ : state) benchmark::DoNotOptimize(batch_backward_map_omp(in, lim));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

const std::vector<double> kSweepDts = {1e-2, 5e-3, 2e-3, 1e-3, 1e-2, 5e-3, 2e-3, 1e-3};

void BM_SweepSerial(benchmark::State& state) {
    const Scenario& s = two_link();
    SimConfig base = s.sim;
    base.duration = 2.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep_timestep(s.model, s.limits, s.controller, s.trajectory, base, kSweepDts));
    }
}

void BM_SweepOmp(benchmark::State& state) {
    const Scenario& s = two_link();
    SimConfig base = s.sim;
    base.duration = 2.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sweep_timestep_omp(s.model, s.limits, s.controller, s.trajectory, base, kSweepDts));
    }
}

}  // namespace

BENCHMARK(BM_ForwardSerial)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_ForwardOmp)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_BackwardSerial)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_BackwardOmp)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepOmp)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
