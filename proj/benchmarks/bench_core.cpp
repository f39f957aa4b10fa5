#include <benchmark/benchmark.h>

#include "affinedim/cutset.hpp"
#include "affinedim/entropy.hpp"
#include "affinedim/lyapunov.hpp"

using namespace affinedim;

namespace {

AffineIFS bench_ifs() {
    Matrix a1(2, 2), a2(2, 2);
    a1 << 0.4, 0.1, -0.1, 0.35;
    a2 << 0.3, -0.15, 0.1, 0.45;
    Vector t1(2), t2(2);
    t1 << 0.1, 0.1;
    t2 << 0.55, 0.5;
    return AffineIFS({{a1, t1}, {a2, t2}}, {0.5, 0.5});
}

void BM_WedgePower(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    CounterRng rng(42);
    Matrix a(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) a(r, c) = rng.next_gaussian();
    for (auto _ : state) benchmark::DoNotOptimize(wedge_power(a, d / 2));
}
BENCHMARK(BM_WedgePower)->Arg(4)->Arg(6)->Arg(8);

void BM_LyapunovSpectrum(benchmark::State& state) {
    AffineIFS ifs = bench_ifs();
    for (auto _ : state)
        benchmark::DoNotOptimize(lyapunov_spectrum(ifs, state.range(0), 1));
}
BENCHMARK(BM_LyapunovSpectrum)->Arg(10'000)->Arg(100'000);

void BM_SampleMeasure(benchmark::State& state) {
    AffineIFS ifs = bench_ifs();
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_measure(ifs, state.range(0), 0, 7));
}
BENCHMARK(BM_SampleMeasure)->Arg(100'000)->Arg(1'000'000);

void BM_DyadicEntropy(benchmark::State& state) {
    AffineIFS ifs = bench_ifs();
    EmpiricalMeasure mu = sample_measure(ifs, 1'000'000, 0, 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(dyadic_entropy(mu, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_DyadicEntropy)->Arg(6)->Arg(10);

void BM_BuildCutset(benchmark::State& state) {
    AffineIFS ifs = bench_ifs();
    for (auto _ : state)
        benchmark::DoNotOptimize(build_cutset(ifs, 1, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BuildCutset)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
