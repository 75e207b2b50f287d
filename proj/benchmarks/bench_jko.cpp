#include <benchmark/benchmark.h>

#include <cmath>

#include "faircomp/fastdiff.hpp"
#include "faircomp/jko1d.hpp"

using namespace faircomp;

namespace {

Pseudoinverse tanh_state(int M) {
    Pseudoinverse q;
    q.X.resize(M);
    for (int i = 0; i < M; ++i) {
        const double w = (i + 0.5) / M - 0.5;
        q.X[i] = std::tan(0.9 * M_PI * w) / std::tan(0.45 * M_PI);
    }
    return q;
}

} // namespace

static void BM_Velocity(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    Pseudoinverse q = tanh_state(M);
    Params p(1, 0.2, 1.2, Frame::Rescaled);
    for (auto _ : state)
        benchmark::DoNotOptimize(jko_velocity(q, p));
    state.SetComplexityN(M);
}
BENCHMARK(BM_Velocity)->RangeMultiplier(2)->Range(100, 1600)->Complexity();

static void BM_ImplicitStep(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    Params p(1, 0.2, 1.2, Frame::Rescaled);
    for (auto _ : state) {
        state.PauseTiming();
        Pseudoinverse q = tanh_state(M);
        state.ResumeTiming();
        StepOutcome s = step_implicit(q, p, 1e-3, {});
        benchmark::DoNotOptimize(s);
    }
    state.SetComplexityN(M);
}
BENCHMARK(BM_ImplicitStep)->RangeMultiplier(2)->Range(100, 800)->Complexity()
    ->Unit(benchmark::kMillisecond);

static void BM_ApplyT(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    TOperatorConfig cfg;
    cfg.params = Params(1, 0.2, 1.2);
    cfg.grid_points = M;
    const DeltaBounds db = delta_bounds(cfg.params);
    cfg.r_max = envelope_truncation_radius(cfg, db);
    RadialDensity rho = gaussian_density(1, 0.6, cfg.r_max, M);
    InteractionKernel kern(1, cfg.params.k);
    for (auto _ : state) {
        ApplyResult t = apply_T(rho, cfg, db, &kern);
        benchmark::DoNotOptimize(t.C_const);
    }
    state.SetComplexityN(M);
}
BENCHMARK(BM_ApplyT)->RangeMultiplier(2)->Range(100, 800)->Complexity()
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
