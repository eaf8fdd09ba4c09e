// Serial reference vs OpenMP trial loops.

#include <benchmark/benchmark.h>

#include "grassmann/restricted.hpp"
#include "grassmann/verifier.hpp"

namespace {

using namespace grassmann;

ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecPolicy::serial : ExecPolicy::openmp;
}

void BM_Suite(benchmark::State& state, SuiteId suite) {
  SuiteConfig cfg;
  cfg.suite = suite;
  cfg.dims = {8};
  cfg.trials = 20;
  cfg.ladder = {8, 16, 32};
  cfg.exec = policy_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(run_suite(cfg));
  state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}

void BM_Preservation(benchmark::State& state) {
  const auto build = seeded_family(DecayProfile::geometric(0.5), 7);
  for (auto _ : state)
    benchmark::DoNotOptimize(preservation_experiment({16, 32, 64}, 1.0, build, policy_of(state)));
  state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}

BENCHMARK_CAPTURE(BM_Suite, atlas, SuiteId::atlas)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Suite, bundles, SuiteId::bundles)
    ->Arg(0)
    ->Arg(1)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Preservation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
