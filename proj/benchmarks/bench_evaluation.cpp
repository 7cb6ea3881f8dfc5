#include <benchmark/benchmark.h>

#include "pvi/elliptic.hpp"
#include "pvi/painleve.hpp"
#include "pvi/premodular.hpp"

using namespace pvi;

namespace
{

const cplx taus[] = {{0.1, 1.2}, {0.45, 0.6}, {-0.3, 2.5}, {0.05, 0.12}};

void BM_WeierstrassP(benchmark::State &state)
{
    const ModuliPoint m(taus[state.range(0)]);
    const cplx z(0.31, 0.17);
    for (auto _ : state) {
        benchmark::DoNotOptimize(weierstrass_p(z, m));
    }
}
BENCHMARK(BM_WeierstrassP)->DenseRange(0, 3);

void BM_ModuliPoint(benchmark::State &state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(invariants_g(ModuliPoint(taus[state.range(0)])));
    }
}
BENCHMARK(BM_ModuliPoint)->DenseRange(0, 3);

void BM_Z2(benchmark::State &state)
{
    const ModuliPoint m(taus[state.range(0)]);
    const TorsionPair p(0.2, 0.35);
    for (auto _ : state) {
        benchmark::DoNotOptimize(premodular_terms(p, m));
    }
}
BENCHMARK(BM_Z2)->DenseRange(0, 3);

void BM_LambdaRS(benchmark::State &state)
{
    const ModuliPoint m(taus[state.range(0)]);
    const TorsionPair p = TorsionPair::rational(1, 3, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lambda_rs(p, m));
    }
}
BENCHMARK(BM_LambdaRS)->DenseRange(0, 3);

} // namespace

BENCHMARK_MAIN();
