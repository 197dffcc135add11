#include <benchmark/benchmark.h>

#include "linbill/driver.hpp"

using namespace linbill;

static void BM_Residual(benchmark::State& state)
{
    const int D = static_cast<int>(state.range(0));
    const Rotation rot = make_rotation(golden_angle(256), 0.1, 1.5, power_cap_for_degree(D));
    const IterationState s = run_schedule(seed_state(rot, D), 2, rot);
    for (auto _ : state) {
        benchmark::DoNotOptimize(residual(s.q, s.phi, rot));
    }
}
BENCHMARK(BM_Residual)->Arg(17)->Arg(35)->Unit(benchmark::kMillisecond);

static void BM_IterateOnce(benchmark::State& state)
{
    const int D = static_cast<int>(state.range(0));
    const Rotation rot = make_rotation(golden_angle(256), 0.1, 1.5, power_cap_for_degree(D));
    const IterationState s = run_schedule(seed_state(rot, D), 2, rot);
    for (auto _ : state) {
        benchmark::DoNotOptimize(iterate_once(s, s.M, rot));
    }
}
BENCHMARK(BM_IterateOnce)->Arg(17)->Arg(35)->Unit(benchmark::kMillisecond)->Iterations(2);
