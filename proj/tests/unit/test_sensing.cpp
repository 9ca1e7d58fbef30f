#include <doctest.h>

#include <cmath>

#include "asl/rng.hpp"
#include "asl/sensing.hpp"

using namespace asl;

namespace {

AnalogScene visual_scene(std::vector<double> values) {
  AnalogScene scene;
  scene.modalities.push_back({"visual", std::move(values)});
  return scene;
}

SensorOption option(double stops, double gain) {
  SensorOption o;
  o.values = {stops, gain};
  return o;
}

bool on_grid(double v) {
  const double scaled = v * 255.0;
  return std::abs(scaled - std::round(scaled)) < 1e-9 && v >= 0.0 && v <= 1.0;
}

}  // namespace

TEST_CASE("mid-scale input lands on the nearest 8-bit level") {
  CaptureModel model;  // sigma0 = 0, blur 1
  const Observation obs = measure(visual_scene({0.5}), option(0.0, 1.0), model, 1);
  REQUIRE(obs.channels.size() == 1);
  CHECK(obs.channels[0].values[0] == doctest::Approx(128.0 / 255.0).epsilon(1e-15));
  CHECK_FALSE(obs.channels[0].clipped[0]);
}

TEST_CASE("eight stops of exposure saturate and set the clip flag") {
  CaptureModel model;
  const Observation obs = measure(visual_scene({0.4}), option(8.0, 1.0), model, 1);
  CHECK(obs.channels[0].values[0] == 1.0);
  CHECK(obs.channels[0].clipped[0]);
}

TEST_CASE("measurement is deterministic given the seed") {
  CaptureModel model;
  model.sigma0 = 0.05;
  model.gain_noise = 0.02;
  model.blur_width = 3;
  const AnalogScene scene = visual_scene({0.1, 0.4, 0.7, 0.2, 0.9});
  const Observation a = measure(scene, option(1.0, 2.0), model, 77);
  const Observation b = measure(scene, option(1.0, 2.0), model, 77);
  CHECK(a.channels[0].values == b.channels[0].values);
  CHECK(a.channels[0].clipped == b.channels[0].clipped);
  const Observation c = measure(scene, option(1.0, 2.0), model, 78);
  CHECK(a.channels[0].values != c.channels[0].values);
}

TEST_CASE("all outputs stay on the 256-level grid") {
  CaptureModel model;
  model.sigma0 = 0.08;
  model.gain_noise = 0.05;
  model.blur_width = 3;
  Rng rng(4242);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> values(8);
    for (double& v : values) v = rng.uniform(-0.5, 1.5);
    const Observation obs =
        measure(visual_scene(values),
                option(rng.uniform(-4.0, 4.0), rng.uniform(0.0, 4.0)), model,
                rng.next_u64());
    for (double v : obs.channels[0].values) CHECK(on_grid(v));
  }
}

TEST_CASE("clip flags reconstruct from the pre-clip pipeline") {
  CaptureModel model;
  model.sigma0 = 0.2;
  const AnalogScene scene = visual_scene({0.05, 0.5, 0.95, 1.4, -0.2});
  const SensorOption opt = option(0.5, 1.0);
  const std::uint64_t seed = 909;
  const Observation obs = measure(scene, opt, model, seed);

  // Recompute the pre-clip values with the same stream.
  Rng rng(seed);
  const double scale = std::exp2(0.5);
  for (std::size_t i = 0; i < scene.modalities[0].values.size(); ++i) {
    const double pre =
        scene.modalities[0].values[i] * scale + rng.normal(0.0, model.sigma0);
    CHECK(obs.channels[0].clipped[i] == (pre < 0.0 || pre > 1.0));
  }
}

TEST_CASE("monotone saturation in exposure with clean capture") {
  CaptureModel model;  // sigma0 = 0, blur 1
  const AnalogScene scene = visual_scene({0.01, 0.2, 0.5, 0.8});
  std::vector<double> prev;
  for (double stops = -4.0; stops <= 4.01; stops += 0.5) {
    const Observation obs = measure(scene, option(stops, 1.0), model, 5);
    const std::vector<double>& cur = obs.channels[0].values;
    if (!prev.empty()) {
      for (std::size_t i = 0; i < cur.size(); ++i) CHECK(cur[i] >= prev[i]);
    }
    prev = cur;
  }
}

TEST_CASE("blur averages neighbours with truncated windows") {
  const std::vector<double> x = {0.0, 1.0, 0.0, 0.0};
  const std::vector<double> y = moving_average(x, 3);
  CHECK(y[0] == doctest::Approx(0.5));
  CHECK(y[1] == doctest::Approx(1.0 / 3.0));
  CHECK(y[2] == doctest::Approx(1.0 / 3.0));
  CHECK(y[3] == doctest::Approx(0.0));
}

TEST_CASE("invalid options are rejected") {
  CaptureModel model;
  const AnalogScene scene = visual_scene({0.5});
  SensorOption bad;
  bad.values = {0.0, -1.0};  // negative gain
  CHECK_THROWS_WITH_AS(measure(scene, bad, model, 1), "invalid option",
                       std::invalid_argument);
  SensorOption nan_opt;
  nan_opt.values = {std::nan(""), 1.0};
  CHECK_THROWS_AS(measure(scene, nan_opt, model, 1), std::invalid_argument);
}

TEST_CASE("capture model validation") {
  CaptureModel model;
  model.blur_width = 2;
  CHECK_THROWS_AS(model.validate(), std::invalid_argument);
  model.blur_width = 3;
  model.sigma0 = -0.1;
  CHECK_THROWS_AS(model.validate(), std::invalid_argument);
}

TEST_CASE("measure_multi with full mass on one modality") {
  AnalogScene scene;
  scene.modalities.push_back({"tactile", {0.2, 0.4}});
  scene.modalities.push_back({"visual", {0.6, 0.8}});
  std::vector<SensorOption> options = {option(0.0, 1.0), option(0.0, 1.0)};
  std::vector<CaptureModel> models(2);
  const Observation obs = measure_multi(scene, options,
                                        ModalityWeights({1.0, 0.0}), models, 3);
  const std::vector<double> fused = obs.fused_features();
  REQUIRE(fused.size() == 4);
  CHECK(fused[0] > 0.0);
  CHECK(fused[1] > 0.0);
  CHECK(fused[2] == 0.0);
  CHECK(fused[3] == 0.0);
}

TEST_CASE("measure_multi symmetric weights on identical modalities") {
  AnalogScene scene;
  scene.modalities.push_back({"left", {0.3, 0.6}});
  scene.modalities.push_back({"right", {0.3, 0.6}});
  std::vector<SensorOption> options = {option(0.0, 1.0), option(0.0, 1.0)};
  std::vector<CaptureModel> models(2);  // noise-free: halves must agree
  const Observation obs = measure_multi(scene, options,
                                        ModalityWeights({0.5, 0.5}), models, 9);
  const std::vector<double> fused = obs.fused_features();
  REQUIRE(fused.size() == 4);
  CHECK(fused[0] == fused[2]);
  CHECK(fused[1] == fused[3]);
}

TEST_CASE("measure_multi scales halves by projected weights") {
  AnalogScene scene;
  scene.modalities.push_back({"a", {1.0}});
  scene.modalities.push_back({"b", {1.0}});
  scene.modalities.push_back({"c", {1.0}});
  std::vector<SensorOption> options(3, option(0.0, 1.0));
  std::vector<CaptureModel> models(3);
  const ModalityWeights w = weights_project({1.0, 1.0, 2.0});
  const Observation obs = measure_multi(scene, options, w, models, 11);
  const std::vector<double> fused = obs.fused_features();
  CHECK(fused[0] == doctest::Approx(0.25));
  CHECK(fused[1] == doctest::Approx(0.25));
  CHECK(fused[2] == doctest::Approx(0.5));
}

TEST_CASE("measure_multi rejects modality mismatches") {
  AnalogScene scene;
  scene.modalities.push_back({"a", {1.0}});
  scene.modalities.push_back({"b", {1.0}});
  std::vector<SensorOption> options(3, option(0.0, 1.0));
  std::vector<CaptureModel> models(2);
  CHECK_THROWS_AS(
      measure_multi(scene, options, ModalityWeights({0.5, 0.5}), models, 1),
      std::invalid_argument);
}
