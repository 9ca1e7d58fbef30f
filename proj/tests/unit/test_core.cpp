#include <doctest.h>

#include <cmath>

#include "asl/core.hpp"
#include "asl/rng.hpp"

using namespace asl;

TEST_CASE("option space enumeration hits grid endpoints") {
  OptionSpace space({{"x", 0.0, 1.0, 2}});
  const auto options = option_space_enumerate(space);
  REQUIRE(options.size() == 2);
  CHECK(options[0].values[0] == 0.0);
  CHECK(options[1].values[0] == 1.0);
}

TEST_CASE("two 3-step axes give nine options in row-major order") {
  OptionSpace space({{"a", -1.0, 1.0, 3}, {"b", 10.0, 30.0, 3}});
  const auto options = option_space_enumerate(space);
  REQUIRE(options.size() == 9);
  CHECK(options[0].values[0] == -1.0);
  CHECK(options[0].values[1] == 10.0);
  // Last axis varies fastest.
  CHECK(options[1].values[0] == -1.0);
  CHECK(options[1].values[1] == 20.0);
  CHECK(options[3].values[0] == 0.0);
  CHECK(options[3].values[1] == 10.0);
  CHECK(options[8].values[0] == 1.0);
  CHECK(options[8].values[1] == 30.0);
}

TEST_CASE("linspace arithmetic: [-3,3] with 7 steps") {
  OptionSpace space({{"stops", -3.0, 3.0, 7}});
  const auto options = option_space_enumerate(space);
  REQUIRE(options.size() == 7);
  for (int i = 0; i < 7; ++i) {
    CHECK(options[static_cast<std::size_t>(i)].values[0] ==
          doctest::Approx(-3.0 + i).epsilon(1e-12));
  }
}

TEST_CASE("enumeration is deterministic and idempotent") {
  OptionSpace space({{"a", -2.0, 2.0, 5}, {"b", 0.0, 1.0, 4}});
  const auto first = option_space_enumerate(space);
  const auto second = option_space_enumerate(space);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].values == second[i].values);
    CHECK(first[i].axis_index == second[i].axis_index);
    CHECK(space.flat_index(first[i].axis_index) == static_cast<int>(i));
  }
}

TEST_CASE("option space rejects bad axes") {
  CHECK_THROWS_AS(OptionSpace({{"x", 1.0, 0.0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(OptionSpace({{"x", 0.0, 1.0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(OptionSpace({}), std::invalid_argument);
}

TEST_CASE("weights_project examples") {
  CHECK(weights_project({2.0, 2.0}).values() == std::vector<double>{0.5, 0.5});
  CHECK(weights_project({-1.0, 3.0}).values() == std::vector<double>{0.0, 1.0});
  const auto uniform = weights_project({0.0, 0.0, 0.0});
  for (double w : uniform.values()) CHECK(w == doctest::Approx(1.0 / 3.0));
  CHECK(weights_project({1.0, 1.0, 2.0}).values() ==
        std::vector<double>{0.25, 0.25, 0.5});
}

TEST_CASE("weights_project rejects empty input") {
  CHECK_THROWS_WITH_AS(weights_project({}), "no modalities",
                       std::invalid_argument);
}

TEST_CASE("weights_project satisfies simplex invariants under fuzz") {
  Rng rng(2024);
  for (int trial = 0; trial < 100000; ++trial) {
    const int n = 1 + rng.uniform_int(6);
    std::vector<double> raw(static_cast<std::size_t>(n));
    for (double& v : raw) {
      // Mix of scales, signs, zeros and huge magnitudes.
      const int shape = rng.uniform_int(4);
      if (shape == 0) v = rng.uniform(-1.0, 1.0);
      else if (shape == 1) v = rng.uniform(-1e6, 1e6);
      else if (shape == 2) v = 0.0;
      else v = rng.uniform(-1.0, 1.0) * 1e300;
    }
    const ModalityWeights w = weights_project(raw);
    REQUIRE(w.size() == raw.size());
    double sum = 0.0;
    for (double x : w.values()) {
      REQUIRE(x >= 0.0);
      REQUIRE(x <= 1.0);
      sum += x;
    }
    REQUIRE(std::abs(sum - 1.0) <= 1e-9);
  }
}

TEST_CASE("modality weights constructor validates") {
  CHECK_THROWS_AS(ModalityWeights({0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(ModalityWeights({1.5, -0.5}), std::invalid_argument);
  CHECK_NOTHROW(ModalityWeights({0.25, 0.75}));
}

TEST_CASE("learner config enforces ranges") {
  LearnerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.gamma = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.gamma = 0.9;
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.alpha = 0.5;
  cfg.epsilon = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.epsilon = 0.2;
  cfg.candidates = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.candidates = 4;
  cfg.quality_buckets = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("quality score validates its range") {
  CHECK_THROWS_AS(QualityScore(1.5, MetricId::kGrip), std::invalid_argument);
  CHECK_THROWS_AS(QualityScore(-0.1, MetricId::kGrip), std::invalid_argument);
  CHECK(QualityScore(0.5, MetricId::kGrip).value() == 0.5);
}

TEST_CASE("fused features concatenate weighted channels") {
  Observation obs;
  obs.channels.push_back({"a", {1.0, 0.5}, {false, false}, {}});
  obs.channels.push_back({"b", {0.25}, {false}, {}});
  obs.weights = ModalityWeights({0.75, 0.25});
  const std::vector<double> fused = obs.fused_features();
  REQUIRE(fused.size() == 3);
  CHECK(fused[0] == doctest::Approx(0.75));
  CHECK(fused[1] == doctest::Approx(0.375));
  CHECK(fused[2] == doctest::Approx(0.0625));
}

TEST_CASE("nearest grid index") {
  OptionSpace space({{"e", -4.0, 4.0, 5}, {"g", 1.0, 4.0, 5}});
  const int idx = space.nearest_index({0.3, 1.2});
  const SensorOption opt = space.option_at(idx);
  CHECK(opt.values[0] == 0.0);
  CHECK(opt.values[1] == 1.0);
}
