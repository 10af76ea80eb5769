#include <benchmark/benchmark.h>

#include "affvol/resolvent.hpp"
#include "affvol/riccati.hpp"
#include "affvol/simulate.hpp"

namespace {

using namespace affvol;

ModelSpec fractional_model() {
    return ModelSpec{Kernel::fractional(0.6), -0.3, 0.09, LevyMeasure::exponential(0.5, 10.0),
                     InputCurve::constant_plus_ktheta(0.3, 0.1)};
}

void BM_SolveRiccati(benchmark::State& state) {
    const Grid g(1.0, static_cast<std::size_t>(state.range(0)));
    const auto m = fractional_model();
    const auto f = TestFunction::imag_const(1.0, g);
    for (auto _ : state) benchmark::DoNotOptimize(solve_riccati(m, f));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveRiccati)->RangeMultiplier(2)->Range(250, 2000)->Complexity(benchmark::oNSquared);

void BM_Deconvolution(benchmark::State& state) {
    const Grid g(1.0, static_cast<std::size_t>(state.range(0)));
    const Kernel k = Kernel::exponential(1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(resolvent_first_kind(k, g, ResolventMethod::discrete));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Deconvolution)->RangeMultiplier(2)->Range(250, 2000)->Complexity(benchmark::oNSquared);

void BM_SimulatePath(benchmark::State& state) {
    const Grid g(1.0, static_cast<std::size_t>(state.range(0)));
    const PathSimulator sim(fractional_model(), g);
    PathBuffers buffers;
    std::uint64_t path = 0;
    for (auto _ : state) {
        sim.run(1, path++, buffers);
        benchmark::DoNotOptimize(buffers.x.data());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimulatePath)->Arg(150)->Arg(300)->Arg(600);

}  // namespace

BENCHMARK_MAIN();
