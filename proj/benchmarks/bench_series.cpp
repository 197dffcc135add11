#include <benchmark/benchmark.h>

#include "linbill/series.hpp"

using namespace linbill;

namespace {

// Dense odd series with O(1) coefficients.
BiSeries filled(int D, int prec)
{
    BiSeries s(D, prec);
    for (int d = 1; d <= D; d += 2) {
        for (int k = 0; k <= d; ++k) {
            s(d - k, k) = Scalar(1.0 / (1 + d + k), 0.5 / (1 + d), prec);
        }
    }
    return s;
}

} // namespace

static void BM_Multiply(benchmark::State& state)
{
    const int D = static_cast<int>(state.range(0));
    const BiSeries a = filled(D, 256);
    const BiSeries b = filled(D, 256);
    for (auto _ : state) {
        benchmark::DoNotOptimize(a * b);
    }
}
BENCHMARK(BM_Multiply)->Arg(15)->Arg(33)->Arg(67)->Unit(benchmark::kMillisecond);

static void BM_InvertUnit(benchmark::State& state)
{
    const int D = static_cast<int>(state.range(0));
    BiSeries a = filled(D, 256);
    a(0, 0) = Scalar(1.0, 0.0, 256);
    for (auto _ : state) {
        benchmark::DoNotOptimize(invert_unit(a));
    }
}
BENCHMARK(BM_InvertUnit)->Arg(15)->Arg(33)->Unit(benchmark::kMillisecond);

static void BM_ComposeCos(benchmark::State& state)
{
    const int D = static_cast<int>(state.range(0));
    const BiSeries s = filled(D, 256);
    const UniSeries f = cos_series(D, 256);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compose_uni(f, s));
    }
}
BENCHMARK(BM_ComposeCos)->Arg(15)->Arg(33)->Unit(benchmark::kMillisecond);

static void BM_PowerTableCompose(benchmark::State& state)
{
    const int D = static_cast<int>(state.range(0));
    const PowerTable table(filled(D, 256));
    const UniSeries f = cos_series(D, 256);
    for (auto _ : state) {
        benchmark::DoNotOptimize(table.compose(f));
    }
}
BENCHMARK(BM_PowerTableCompose)->Arg(15)->Arg(33)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
