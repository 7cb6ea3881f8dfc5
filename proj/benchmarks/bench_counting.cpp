#include <benchmark/benchmark.h>

#include "pvi/torsion.hpp"
#include "pvi/zeros.hpp"

using namespace pvi;

namespace
{

void BM_WindingF0(benchmark::State &state)
{
    const TorsionPair p(0.2, 0.1);
    const DomainSpec d = DomainSpec::make(DomainKind::F0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(winding_count(p, d));
    }
}
BENCHMARK(BM_WindingF0)->Unit(benchmark::kMillisecond);

void BM_LocateF0(benchmark::State &state)
{
    const TorsionPair p(0.7, 0.2);
    const DomainSpec d = DomainSpec::make(DomainKind::F0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(locate_zeros(p, d));
    }
}
BENCHMARK(BM_LocateF0)->Unit(benchmark::kMillisecond);

void BM_CountMN(benchmark::State &state)
{
    const std::int64_t N = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_mn_zeros(N));
    }
}
BENCHMARK(BM_CountMN)->DenseRange(5, 11, 2)->Unit(benchmark::kMillisecond);

void BM_ClassifyQN(benchmark::State &state)
{
    const auto q = enumerate_qn(state.range(0));
    for (auto _ : state) {
        for (const auto &p : q) {
            benchmark::DoNotOptimize(classify_orbit(p));
        }
    }
    state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(q.size()));
}
BENCHMARK(BM_ClassifyQN)->Arg(12)->Arg(24)->Arg(97);

void BM_OrbitBruteForce(benchmark::State &state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(orbit_brute_force(state.range(0)));
    }
}
BENCHMARK(BM_OrbitBruteForce)->Arg(12)->Arg(24);

} // namespace

BENCHMARK_MAIN();
