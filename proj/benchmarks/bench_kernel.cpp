#include <benchmark/benchmark.h>

#include "faircomp/kernel.hpp"

using namespace faircomp;

static void BM_PsiHypergeometric(benchmark::State& state) {
    PsiEvaluator psi(6, -1.5);
    double s = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(psi.eval(s, PsiBackend::Hypergeometric));
        s += 0.01;
        if (s > 5.0)
            s = 0.1;
        if (std::abs(s - 1.0) < 0.02)
            s += 0.05;
    }
}
BENCHMARK(BM_PsiHypergeometric);

static void BM_PsiQuadrature(benchmark::State& state) {
    PsiEvaluator psi(6, -1.5);
    double s = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(psi.eval(s, PsiBackend::Quadrature));
        s += 0.01;
        if (s > 5.0)
            s = 0.1;
        if (std::abs(s - 1.0) < 0.02)
            s += 0.05;
    }
}
BENCHMARK(BM_PsiQuadrature);

static void BM_PsiNearOne(benchmark::State& state) {
    PsiEvaluator psi(6, -4.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(psi.eval(1.0 - 1e-3, PsiBackend::NearOne));
}
BENCHMARK(BM_PsiNearOne);

static void BM_RadialPotential1D(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    auto rho = gaussian_density(1, 0.8, 6.0, M);
    Params p(1, 0.5, 1.0);
    double r = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(radial_potential(rho, r, p));
        r = r < 3.0 ? r + 0.37 : 0.0;
    }
    state.SetComplexityN(M);
}
BENCHMARK(BM_RadialPotential1D)->RangeMultiplier(2)->Range(100, 800)->Complexity();

static void BM_RadialPotential3D_Cached(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    auto rho = gaussian_density(3, 0.8, 6.0, M);
    Params p(3, 0.5, 1.0);
    InteractionKernel kern(3, 0.5);
    // warm the ratio cache once, as the solvers do
    for (std::size_t i = 0; i < rho.size(); i += 7)
        benchmark::DoNotOptimize(radial_potential(rho, rho.nodes[i], p, &kern));
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(radial_potential(rho, rho.nodes[i % M], p, &kern));
        i += 13;
    }
    state.SetComplexityN(M);
}
BENCHMARK(BM_RadialPotential3D_Cached)->RangeMultiplier(2)->Range(100, 400)->Complexity();

BENCHMARK_MAIN();
