#include <benchmark/benchmark.h>

#include "sigmmd/sig_kernel.hpp"
#include "sigmmd/signature.hpp"
#include "sigmmd/simulate.hpp"

namespace {

sigmmd::PathBatch bm_batch(std::size_t n, std::size_t steps) {
    const sigmmd::SimSpec spec{sigmmd::model::ScaledBM{0.2}, steps, 1.0, 1};
    const std::vector<sigmmd::SimSpec> specs{spec};
    return sigmmd::multichannel_batch(specs, n);
}

void BM_Signature(benchmark::State& state) {
    const auto batch = bm_batch(1, 64);
    const auto depth = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sigmmd::signature(batch[0], depth));
}
BENCHMARK(BM_Signature)->Arg(4)->Arg(6)->Arg(8)->Arg(10);

void BM_PdeKernel(benchmark::State& state) {
    const auto batch = bm_batch(2, 64);
    const sigmmd::PdeBackend backend{sigmmd::StaticKernel::linear(), static_cast<int>(state.range(0)), 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(sigmmd::pde_kernel(batch[0], batch[1], backend));
}
BENCHMARK(BM_PdeKernel)->Arg(0)->Arg(1)->Arg(2)->Arg(3);

void BM_TruncatedGram(benchmark::State& state) {
    const auto batch = bm_batch(static_cast<std::size_t>(state.range(0)), 64);
    const sigmmd::KernelConfig config{sigmmd::TruncatedBackend{10, sigmmd::WeightFunction::unit()}};
    for (auto _ : state) benchmark::DoNotOptimize(sigmmd::gram(batch, config));
}
BENCHMARK(BM_TruncatedGram)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_PdeGram(benchmark::State& state) {
    const auto batch = bm_batch(static_cast<std::size_t>(state.range(0)), 32);
    const sigmmd::KernelConfig config{sigmmd::PdeBackend{sigmmd::StaticKernel::rbf(0.5), 1, 1.0}};
    for (auto _ : state) benchmark::DoNotOptimize(sigmmd::gram(batch, config));
}
BENCHMARK(BM_PdeGram)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
