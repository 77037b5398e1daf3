#include <benchmark/benchmark.h>

#include <vector>

#include "acaf/distribution.hpp"
#include "acaf/dynamics.hpp"
#include "acaf/likelihood.hpp"

namespace {

acaf::ParamVector bench_theta() {
    acaf::ParamVector th;
    th.beta0 = -0.237; th.beta1 = 0.785; th.beta2 = 0.064; th.beta3 = 7.961;
    th.gamma0 = 0.224; th.gamma1 = 0.758; th.gamma2 = 0.421; th.gamma3 = 6.663;
    th.delta0 = -0.038; th.delta1 = 0.91; th.delta2 = 0.421; th.delta3 = 4.732;
    th.mu = -0.242;
    return th;
}

const acaf::SimulatedPath& bench_path() {
    static const acaf::SimulatedPath path =
        acaf::simulate(bench_theta(), acaf::ModelVariant::AcafFull, 5000, 500, 1);
    return path;
}

void BM_AfLogPdf(benchmark::State& state) {
    const acaf::AFParams p{-0.242, 0.29, 5.0, 10.0};
    double q = 0.05;
    for (auto _ : state) {
        benchmark::DoNotOptimize(acaf::af_log_pdf(q, p));
        q = q < 1.0 ? q + 1e-4 : 0.05;
    }
}
BENCHMARK(BM_AfLogPdf);

void BM_AfQuantile(benchmark::State& state) {
    const acaf::AFParams p{-0.242, 0.29, 5.0, 10.0};
    for (auto _ : state) benchmark::DoNotOptimize(acaf::af_quantile(0.99, p));
}
BENCHMARK(BM_AfQuantile);

void BM_Simulate(benchmark::State& state) {
    const acaf::ParamVector th = bench_theta();
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(acaf::simulate(th, acaf::ModelVariant::AcafFull, n, 100, 7));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(1000)->Arg(5000);

void BM_FilterPath(benchmark::State& state) {
    const acaf::ParamVector th = bench_theta();
    const auto& path = bench_path();
    for (auto _ : state)
        benchmark::DoNotOptimize(acaf::filter_path(th, path.series, path.states.front()));
    state.SetItemsProcessed(state.iterations() * path.series.size());
}
BENCHMARK(BM_FilterPath);

void BM_Nll(benchmark::State& state) {
    const acaf::ParamVector th = bench_theta();
    const auto& path = bench_path();
    const auto z = acaf::to_unconstrained(th, path.series.min());
    for (auto _ : state) benchmark::DoNotOptimize(acaf::nll(z, path.series));
    state.SetItemsProcessed(state.iterations() * path.series.size());
}
BENCHMARK(BM_Nll);

void BM_ScoreMatrix(benchmark::State& state) {
    const acaf::ParamVector th = bench_theta();
    const auto& path = bench_path();
    for (auto _ : state)
        benchmark::DoNotOptimize(acaf::score_matrix(th, path.series));
}
BENCHMARK(BM_ScoreMatrix);

}  // namespace

BENCHMARK_MAIN();
