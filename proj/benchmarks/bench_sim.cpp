#include <benchmark/benchmark.h>

#include "shm/sim/excitation.hpp"
#include "shm/sim/integrator.hpp"
#include "shm/sim/structure.hpp"

namespace {

using namespace shm::sim;

void BM_GenerateExcitation(benchmark::State& state) {
    ExcitationConfig cfg;
    for (auto _ : state) {
        cfg.seed++;
        benchmark::DoNotOptimize(generate_excitation(cfg));
    }
}
BENCHMARK(BM_GenerateExcitation)->Unit(benchmark::kMillisecond);

// One full 25.6 s trial; range(0) is the damage state.
void BM_SimulateTrial(benchmark::State& state) {
    const StructureParams params =
        build_params(state_condition(static_cast<int>(state.range(0))), calibrate_baseline());
    const auto force = generate_excitation(ExcitationConfig{});
    for (auto _ : state) benchmark::DoNotOptimize(simulate_trial(params, force));
}
BENCHMARK(BM_SimulateTrial)->Arg(1)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_FilterDecimate(benchmark::State& state) {
    const auto taps = design_lowpass(140.0, 2560.0, 511);
    const auto force = generate_excitation(ExcitationConfig{});
    for (auto _ : state) benchmark::DoNotOptimize(filter_decimate(force, taps, 8));
}
BENCHMARK(BM_FilterDecimate)->Unit(benchmark::kMillisecond);

}  // namespace
