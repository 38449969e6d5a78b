#include <benchmark/benchmark.h>

#include "blockfade/asymptotic.hpp"
#include "blockfade/fbl.hpp"
#include "blockfade/specfun.hpp"

using namespace blockfade;

static void BM_InfoDensityBlock(benchmark::State& state) {
    const ChannelParams params(static_cast<int>(state.range(0)), 10.0);
    const InfoDensityKernel kernel(params);
    RngStream rng(1, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel.sample_density(rng));
    }
}
BENCHMARK(BM_InfoDensityBlock)->Arg(2)->Arg(50)->Arg(200);

static void BM_CodewordDensity(benchmark::State& state) {
    const ChannelParams params(50, 10.0);
    const std::int64_t blocks = state.range(0);
    RngStream rng(1, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_codeword_density(params, blocks, rng));
    }
    state.SetItemsProcessed(state.iterations() * blocks);
}
BENCHMARK(BM_CodewordDensity)->Arg(20)->Arg(80)->Arg(800);

static void BM_RegIncGamma(benchmark::State& state) {
    double x = 0.0;
    for (auto _ : state) {
        x += 1e-4;
        benchmark::DoNotOptimize(specfun::reg_inc_gamma(49.0, 40.0 + x));
    }
}
BENCHMARK(BM_RegIncGamma);

static void BM_LowerBound(benchmark::State& state) {
    const ChannelParams params(static_cast<int>(state.range(0)), 10.0);
    const QuadratureSpec quad;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lower_bound_L(params, quad));
    }
}
BENCHMARK(BM_LowerBound)->Arg(2)->Arg(50)->Arg(200);

static void BM_UpperBound(benchmark::State& state) {
    const ChannelParams params(static_cast<int>(state.range(0)), 10.0);
    const specfun::Tolerance tol;
    for (auto _ : state) {
        benchmark::DoNotOptimize(upper_bound_U(params, tol));
    }
}
BENCHMARK(BM_UpperBound)->Arg(2)->Arg(50)->Arg(200);

static void BM_DtEpsilonPass(benchmark::State& state) {
    const ChannelParams params(50, 10.0);
    const auto samples = sample_info_densities(params, 20, state.range(0), 7, 1 << 14);
    double log_m = 900.0;
    for (auto _ : state) {
        log_m += 1e-3;
        benchmark::DoNotOptimize(dt_epsilon(samples, log_m));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DtEpsilonPass)->Arg(100'000);

BENCHMARK_MAIN();
