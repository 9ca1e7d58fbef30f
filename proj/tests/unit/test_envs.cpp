#include <doctest.h>

#include <cmath>

#include "asl/envs.hpp"
#include "asl/rng.hpp"

using namespace asl;

TEST_CASE("reset is deterministic per kind") {
  for (EnvKind kind : {EnvKind::kSceneClassification, EnvKind::kDriftingPerception,
                       EnvKind::kBalance, EnvKind::kGrip}) {
    const EnvSpec spec = default_env_spec(kind);
    Env a(spec), b(spec);
    const AnalogScene sa = a.reset(321);
    const AnalogScene sb = b.reset(321);
    REQUIRE(sa.modalities.size() == sb.modalities.size());
    for (std::size_t m = 0; m < sa.modalities.size(); ++m) {
      CHECK(sa.modalities[m].values == sb.modalities[m].values);
    }
  }
}

TEST_CASE("scene classification labels are in range") {
  const EnvSpec spec = default_env_spec(EnvKind::kSceneClassification);
  Env env(spec);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const AnalogScene scene = env.reset(seed);
    REQUIRE(scene.label.has_value());
    CHECK(*scene.label >= 0);
    CHECK(*scene.label < spec.classes);
    CHECK(env.current_label() == *scene.label);
  }
}

TEST_CASE("balance starts near upright") {
  const EnvSpec spec = default_env_spec(EnvKind::kBalance);
  Env env(spec);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    env.reset(seed);
    CHECK(std::abs(env.balance_state()[2]) <= 0.05);
  }
}

TEST_CASE("balance terminates past the angle limit with zero reward") {
  EnvSpec spec = default_env_spec(EnvKind::kBalance);
  spec.dynamics_noise = 0.0;
  Env env(spec);
  env.reset(3);
  // Constant rightward force destabilizes the pole within the horizon.
  bool terminated = false;
  for (int t = 0; t < spec.horizon; ++t) {
    const Env::StepResult r = env.step(0, mix_seed(3, static_cast<std::uint64_t>(t)));
    if (r.done) {
      CHECK(std::abs(env.balance_state()[2]) > spec.theta_limit);
      CHECK(r.task_reward == 0.0);
      terminated = true;
      break;
    }
    CHECK(r.task_reward == 1.0);
  }
  CHECK(terminated);
}

TEST_CASE("balance zero state with zero noise is a fixed point of gravity term") {
  EnvSpec spec = default_env_spec(EnvKind::kBalance);
  spec.dynamics_noise = 0.0;
  spec.force_mag = 0.0;
  Env env(spec);
  env.reset(0);
  // Zero the latent exactly, then step with zero force.
  Env fresh(spec);
  fresh.reset(0);
  // A reset draws near-zero state; with zero force and noise the linear map
  // keeps a zero state at zero. Drive the state to zero via the scene check.
  std::array<double, 4> zero{};
  const AnalogScene scene = fresh.scene_for_state(zero);
  for (double v : scene.modalities[0].values) CHECK(v == doctest::Approx(0.5));
}

TEST_CASE("drifting lighting follows a clamped random walk") {
  EnvSpec spec = default_env_spec(EnvKind::kDriftingPerception);
  spec.lighting_sigma = 3.0;  // exaggerate to hit the clamp quickly
  Env env(spec);
  env.reset(11);
  double prev = env.current_lighting();
  bool clamped = false;
  for (int t = 0; t < 200; ++t) {
    env.step(std::nullopt, mix_seed(11, static_cast<std::uint64_t>(t)));
    const double light = env.current_lighting();
    CHECK(light <= spec.lighting_clamp);
    CHECK(light >= -spec.lighting_clamp);
    if (std::abs(light) == spec.lighting_clamp) clamped = true;
    prev = light;
  }
  CHECK(clamped);
  (void)prev;
}

TEST_CASE("perception kinds reject actions; acting kinds require them") {
  Env drift(default_env_spec(EnvKind::kDriftingPerception));
  drift.reset(1);
  CHECK_THROWS_AS(drift.step(0, 2), std::invalid_argument);
  CHECK_NOTHROW(drift.step(std::nullopt, 2));

  Env balance(default_env_spec(EnvKind::kBalance));
  balance.reset(1);
  CHECK_THROWS_AS(balance.step(std::nullopt, 2), std::invalid_argument);
  CHECK_THROWS_AS(balance.step(7, 2), std::invalid_argument);
}

TEST_CASE("grip reward is sparse: zero until completion, one exactly once") {
  const EnvSpec spec = default_env_spec(EnvKind::kGrip);
  Env env(spec);
  env.reset(17);
  double total = 0.0;
  int steps = 0;
  bool done = false;
  // regrip then turn repeatedly: the intended successful strategy
  for (int t = 0; t < spec.horizon && !done; ++t) {
    const int action = t % 8 == 0 ? 1 : 0;
    const Env::StepResult r =
        env.step(action, mix_seed(17, static_cast<std::uint64_t>(t)));
    if (!r.done) CHECK(r.task_reward == 0.0);
    total += r.task_reward;
    done = r.done;
    ++steps;
  }
  CHECK(done);
  CHECK(total == 1.0);
  CHECK(steps < spec.horizon);
}

TEST_CASE("grip cap angle advances only while engaged") {
  const EnvSpec spec = default_env_spec(EnvKind::kGrip);
  Env env(spec);
  env.reset(5);
  CHECK(env.grip_engagement() == 0.0);
  env.step(0, 100);  // turn with no grip
  CHECK(env.grip_angle() == 0.0);
  env.step(1, 101);  // regrip
  const double g = env.grip_engagement();
  CHECK(g >= 0.5);
  CHECK(g <= 1.0);
  env.step(0, 102);
  CHECK(env.grip_angle() == doctest::Approx(spec.grip_dphi * g));
  env.step(2, 103);  // release
  CHECK(env.grip_engagement() == 0.0);
}

TEST_CASE("balance range capture clips symmetric extremes") {
  EnvSpec spec = default_env_spec(EnvKind::kBalance);
  for (auto& cm : spec.capture_models) cm.sigma0 = 0.0;
  Env env(spec);
  env.reset(0);
  // theta at +nominal maps to analog 1.0; a narrow range must clip it.
  std::array<double, 4> tilted{0.0, 0.0, 0.21, 0.0};
  const AnalogScene scene = env.scene_for_state(tilted);
  const int narrow = 0;  // range grid starts at 0.25
  const Observation obs = env.capture(scene, narrow, 9);
  CHECK(obs.channels[0].clipped[2]);
  CHECK(obs.channels[0].values[2] == 1.0);
  // the widest range keeps it in-range
  const int wide = spec.option_spaces[0].total_size() - 1;
  const Observation obs_wide = env.capture(scene, wide, 9);
  CHECK_FALSE(obs_wide.channels[0].clipped[2]);
}

TEST_CASE("observation buckets are stable and in range") {
  for (EnvKind kind : {EnvKind::kBalance, EnvKind::kGrip}) {
    const EnvSpec spec = default_env_spec(kind);
    Env env(spec);
    AnalogScene scene = env.reset(77);
    Observation obs =
        kind == EnvKind::kGrip
            ? env.capture_multi(scene, spec.fixed_option_index,
                                ModalityWeights({0.5, 0.5}), 5)
            : env.capture(scene, spec.fixed_option_index[0], 5);
    const int bucket = env.observation_bucket(obs);
    CHECK(bucket >= 0);
    CHECK(bucket < env.observation_bucket_count());
    CHECK(env.observation_bucket(obs) == bucket);
  }
}

TEST_CASE("training datasets are labeled and deterministic") {
  for (EnvKind kind : {EnvKind::kSceneClassification, EnvKind::kBalance,
                       EnvKind::kGrip}) {
    const EnvSpec spec = default_env_spec(kind);
    const auto a = make_training_dataset(spec, 50, 999);
    const auto b = make_training_dataset(spec, 50, 999);
    REQUIRE(a.size() == 50);
    const int classes = training_class_count(spec);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].second == b[i].second);
      CHECK(a[i].second >= 0);
      CHECK(a[i].second < classes);
      CHECK(a[i].first.fused_features() == b[i].first.fused_features());
    }
  }
}

TEST_CASE("full episodes are seed-deterministic with a fixed policy") {
  const EnvSpec spec = default_env_spec(EnvKind::kBalance);
  for (int run = 0; run < 2; ++run) {
    static std::vector<double> reference;
    Env env(spec);
    env.reset(404);
    std::vector<double> trace;
    for (int t = 0; t < 50; ++t) {
      const Env::StepResult r =
          env.step(t % 2, mix_seed(404, static_cast<std::uint64_t>(t)));
      for (double v : r.scene.modalities[0].values) trace.push_back(v);
      if (r.done) break;
    }
    if (run == 0) {
      reference = trace;
    } else {
      CHECK(trace == reference);
    }
  }
}

TEST_CASE("spec validation rejects inconsistent shapes") {
  EnvSpec spec = default_env_spec(EnvKind::kBalance);
  spec.horizon = 0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = default_env_spec(EnvKind::kSceneClassification);
  spec.action_count = 2;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = default_env_spec(EnvKind::kGrip);
  spec.fixed_option_index = {0};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
