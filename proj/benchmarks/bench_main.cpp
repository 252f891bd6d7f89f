#include <benchmark/benchmark.h>

#include "aif/harness.hpp"
#include "aif/inference.hpp"
#include "aif/planning.hpp"
#include "aif/tmaze.hpp"

namespace {

using namespace aif;

void BM_ExpectedFreeEnergyAllPolicies(benchmark::State& state) {
  const auto model = tmaze::build_tmaze_model();
  const Categorical q0(model.state_prior);
  PlanContext ctx;
  for (auto _ : state) {
    for (const auto& p : model.policies) {
      benchmark::DoNotOptimize(expected_free_energy(model, q0, p, ctx, ObjectiveKind::ExpectedFreeEnergy));
    }
  }
}
BENCHMARK(BM_ExpectedFreeEnergyAllPolicies);

void BM_InferStates(benchmark::State& state) {
  const auto model = tmaze::build_tmaze_model();
  const std::vector<Observation> obs{{1, tmaze::outcome::kCenter}, {2, tmaze::outcome::kCueWhite}};
  for (auto _ : state) benchmark::DoNotOptimize(infer_states(model, model.policies[7], obs));
}
BENCHMARK(BM_InferStates);

void BM_Experiment(benchmark::State& state) {
  harness::ExperimentConfig config;
  config.agent = static_cast<ObjectiveKind>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(harness::run_experiment(config));
}
BENCHMARK(BM_Experiment)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
