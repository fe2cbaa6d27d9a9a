// Serial reference vs OpenMP kernels: per-target localization of one world and
// a small multi-run experiment.

#include <benchmark/benchmark.h>

#include <map>

#include "rail/experiment.hpp"
#include "rail/localizer.hpp"

namespace {

using namespace rail;

const experiment::Scenario& scenario(std::size_t density) {
    static std::map<std::size_t, experiment::Scenario> cache;
    auto it = cache.find(density);
    if (it == cache.end()) {
        it = cache.emplace(density, experiment::make_scenario({}, density, 20250101)).first;
    }
    return it->second;
}

void BM_LocalizeSerial(benchmark::State& state) {
    const auto& s = scenario(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(localizer::localize_all_serial(s.deployment, s.graph));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LocalizeParallel(benchmark::State& state) {
    const auto& s = scenario(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(localizer::localize_all(s.deployment, s.graph));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

experiment::ExperimentConfig sweep_config() {
    experiment::ExperimentConfig cfg;
    cfg.runs_per_density = 8;
    return cfg;
}

void BM_ExperimentSerial(benchmark::State& state) {
    const auto cfg = sweep_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(experiment::run_experiment(cfg, experiment::Execution::Serial));
    }
}

void BM_ExperimentParallel(benchmark::State& state) {
    const auto cfg = sweep_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(experiment::run_experiment(cfg, experiment::Execution::Parallel));
    }
}

}  // namespace

BENCHMARK(BM_LocalizeSerial)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LocalizeParallel)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ExperimentSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExperimentParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
