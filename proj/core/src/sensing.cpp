#include "asl/sensing.hpp"

#include <cmath>
#include <stdexcept>

#include "asl/rng.hpp"

namespace asl {

void CaptureModel::validate() const {
  if (!(sigma0 >= 0.0) || !std::isfinite(sigma0)) {
    throw std::invalid_argument("CaptureModel: sigma0 must be finite and >= 0");
  }
  if (!(gain_noise >= 0.0) || !std::isfinite(gain_noise)) {
    throw std::invalid_argument("CaptureModel: gain_noise must be finite and >= 0");
  }
  if (blur_width < 1 || blur_width % 2 == 0) {
    throw std::invalid_argument("CaptureModel: blur_width must be odd and >= 1");
  }
}

DigitizedChannel digitize(const std::vector<double>& pre) {
  DigitizedChannel out;
  out.values.resize(pre.size());
  out.clipped.resize(pre.size());
  for (std::size_t i = 0; i < pre.size(); ++i) {
    const double y = pre[i];
    const bool clip = y < 0.0 || y > 1.0;
    const double c = clip ? (y < 0.0 ? 0.0 : 1.0) : y;
    out.values[i] = std::round(c * 255.0) / 255.0;
    out.clipped[i] = clip;
  }
  return out;
}

std::vector<double> moving_average(const std::vector<double>& x, int width) {
  if (width <= 1) return x;
  const int half = width / 2;
  const int n = static_cast<int>(x.size());
  std::vector<double> out(x.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (int j = lo; j <= hi; ++j) sum += x[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

ObservationChannel capture_channel(const std::string& name,
                                   const std::vector<double>& analog,
                                   double scale, double pivot,
                                   double noise_sigma,
                                   const SensorOption& option, int blur_width,
                                   std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> pre(analog.size());
  for (std::size_t i = 0; i < analog.size(); ++i) {
    pre[i] = (analog[i] - pivot) * scale + pivot + rng.normal(0.0, noise_sigma);
  }
  pre = moving_average(pre, blur_width);
  DigitizedChannel dig = digitize(pre);

  ObservationChannel ch;
  ch.name = name;
  ch.values = std::move(dig.values);
  ch.clipped = std::move(dig.clipped);
  ch.option = option;
  return ch;
}

namespace {

const ModalitySignal& visual_or_first(const AnalogScene& scene) {
  if (scene.modalities.empty()) {
    throw std::invalid_argument("measure: scene has no modalities");
  }
  if (const ModalitySignal* m = scene.find("visual")) return *m;
  return scene.modalities.front();
}

}  // namespace

Observation measure(const AnalogScene& scene, const SensorOption& option,
                    const CaptureModel& model, std::uint64_t seed) {
  model.validate();
  if (option.values.empty() || option.values.size() > 2 || !option.finite()) {
    throw std::invalid_argument("invalid option");
  }
  const double stops = option.values[0];
  const double gain = option.values.size() > 1 ? option.values[1] : 1.0;
  if (gain < 0.0) throw std::invalid_argument("invalid option");

  const ModalitySignal& signal = visual_or_first(scene);
  const double scale = std::exp2(stops) * gain;
  const double sigma = model.sigma0 + model.gain_noise * std::max(gain - 1.0, 0.0);

  Observation obs;
  obs.channels.push_back(capture_channel(signal.name, signal.values, scale,
                                         0.0, sigma, option, model.blur_width,
                                         seed));
  return obs;
}

Observation measure_multi(const AnalogScene& scene,
                          const std::vector<SensorOption>& options,
                          const ModalityWeights& weights,
                          const std::vector<CaptureModel>& models,
                          std::uint64_t seed) {
  const std::size_t n = scene.modalities.size();
  if (n == 0 || options.size() != n || weights.size() != n ||
      models.size() != n) {
    throw std::invalid_argument("measure_multi: modality count mismatch");
  }
  Observation obs;
  obs.weights = weights;
  for (std::size_t m = 0; m < n; ++m) {
    models[m].validate();
    if (options[m].values.empty() || !options[m].finite()) {
      throw std::invalid_argument("invalid option");
    }
    const double stops = options[m].values[0];
    const double gain = options[m].values.size() > 1 ? options[m].values[1] : 1.0;
    if (gain < 0.0) throw std::invalid_argument("invalid option");
    const double scale = std::exp2(stops) * gain;
    const double sigma =
        models[m].sigma0 + models[m].gain_noise * std::max(gain - 1.0, 0.0);
    obs.channels.push_back(capture_channel(
        scene.modalities[m].name, scene.modalities[m].values, scale, 0.0,
        sigma, options[m], models[m].blur_width, seed + m));
  }
  return obs;
}

}  // namespace asl
