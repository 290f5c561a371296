#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ucpd/calibrate.hpp"
#include "ucpd/detect.hpp"
#include "ucpd/uprocess.hpp"

namespace {

std::vector<double> normal_series(std::size_t n) {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> normal;
    std::vector<double> x(n);
    for (double& v : x) v = normal(rng);
    return x;
}

}  // namespace

static void BM_Oracle(benchmark::State& state) {
    const auto x = normal_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ucpd::u_process_oracle(x, ucpd::Kernel::wilcoxon()));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Oracle)->RangeMultiplier(2)->Range(32, 256)->Complexity();

static void BM_IncrementalWilcoxon(benchmark::State& state) {
    const auto x = normal_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ucpd::u_process_incremental(x, ucpd::Kernel::wilcoxon()));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IncrementalWilcoxon)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

static void BM_IncrementalHuber(benchmark::State& state) {
    const auto x = normal_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ucpd::u_process_incremental(x, ucpd::Kernel::huber(1.0)));
}
BENCHMARK(BM_IncrementalHuber)->Arg(800)->Arg(3200);

static void BM_RankFast(benchmark::State& state) {
    const auto x = normal_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ucpd::u_process_rank_fast(x));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RankFast)->RangeMultiplier(4)->Range(64, 1 << 16)->Complexity(benchmark::oNLogN);

static void BM_Linear(benchmark::State& state) {
    const auto x = normal_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ucpd::u_process_linear(x));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Linear)->RangeMultiplier(4)->Range(64, 1 << 16)->Complexity(benchmark::oN);

static void BM_WeightedScan(benchmark::State& state) {
    const auto x = normal_series(static_cast<std::size_t>(state.range(0)));
    const ucpd::UProcess up = ucpd::u_process_linear(x);
    const double gamma = state.range(1) / 4.0;
    for (auto _ : state) benchmark::DoNotOptimize(ucpd::weighted_scan(up, gamma));
}
BENCHMARK(BM_WeightedScan)->ArgsProduct({{800, 10000}, {0, 1, 2}});

// One Monte Carlo replicate as run by the simulate module.
static void BM_RunTest(benchmark::State& state) {
    const auto x = normal_series(800);
    const ucpd::TestConfig config{state.range(0) ? ucpd::Kernel::wilcoxon() : ucpd::Kernel::cusum(), 0.5,
                                  ucpd::EstimateSigma{}, 0.05};
    for (auto _ : state) benchmark::DoNotOptimize(ucpd::run_test(x, config));
}
BENCHMARK(BM_RunTest)->Arg(0)->Arg(1);

static void BM_KsQuantile(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(ucpd::ks_quantile(0.95));
}
BENCHMARK(BM_KsQuantile);
BENCHMARK_MAIN();
