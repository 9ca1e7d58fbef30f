#include <benchmark/benchmark.h>

#include "asl/envs.hpp"
#include "asl/learn.hpp"
#include "asl/loops.hpp"
#include "asl/perception.hpp"
#include "asl/policies.hpp"
#include "asl/sensing.hpp"

namespace {

asl::PerceptionModel tiny_model(int classes, int dim) {
  asl::PerceptionModel m;
  m.classes = classes;
  m.dim = dim;
  m.weights.assign(static_cast<std::size_t>(classes) * dim, 0.0);
  m.bias.assign(static_cast<std::size_t>(classes), 0.0);
  asl::Rng rng(11);
  for (double& w : m.weights) w = rng.normal(0.0, 0.4);
  return m;
}

void BM_Measure(benchmark::State& state) {
  const asl::EnvSpec spec = asl::default_env_spec(asl::EnvKind::kSceneClassification);
  asl::Env env(spec);
  const asl::AnalogScene scene = env.reset(1);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(env.capture(scene, 12, ++seed));
  }
}
BENCHMARK(BM_Measure);

void BM_Predict(benchmark::State& state) {
  const asl::EnvSpec spec = asl::default_env_spec(asl::EnvKind::kSceneClassification);
  asl::Env env(spec);
  const asl::AnalogScene scene = env.reset(1);
  const asl::Observation obs = env.capture(scene, 12, 3);
  const asl::PerceptionModel model = tiny_model(spec.classes, spec.feature_dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(asl::predict(model, obs));
  }
}
BENCHMARK(BM_Predict);

void BM_SingleShotEpisode(benchmark::State& state) {
  const asl::EnvSpec spec = asl::default_env_spec(asl::EnvKind::kSceneClassification);
  const asl::PerceptionModel model = tiny_model(spec.classes, spec.feature_dim);
  const int k = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(asl::run_single_shot(spec, k, model, ++seed));
  }
}
BENCHMARK(BM_SingleShotEpisode)->Arg(4)->Arg(8)->Arg(25);

void BM_SensePolicyStep(benchmark::State& state) {
  asl::SensePolicyState policy(4, 25, 0.1, 0.2);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(asl::sense_policy_step(policy, 0.7, 3, ++seed));
  }
}
BENCHMARK(BM_SensePolicyStep);

void BM_ValueIteration(benchmark::State& state) {
  const asl::ExplicitMdp mdp = asl::toy_mdp_fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(asl::value_iteration(mdp, 0.9, 1e-8));
  }
}
BENCHMARK(BM_ValueIteration);

}  // namespace

BENCHMARK_MAIN();
