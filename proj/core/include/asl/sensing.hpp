#pragma once

#include <cstdint>
#include <vector>

#include "asl/core.hpp"

namespace asl {

// Parameters of the capture pipeline.
struct CaptureModel {
  double sigma0 = 0.0;       // base read-noise, normalized intensity units
  double gain_noise = 0.0;   // extra noise per unit of gain above 1
  int blur_width = 1;        // moving-average width, odd, >= 1

  void validate() const;
};

struct DigitizedChannel {
  std::vector<double> values;  // on the 256-level grid in [0,1]
  std::vector<bool> clipped;
};

// Clip to [0,1] (flagging values that fell outside) and quantize to the
// nearest of 256 levels, ties away from zero.
DigitizedChannel digitize(const std::vector<double>& pre);

// Moving average of the given odd width; windows are truncated at the edges.
std::vector<double> moving_average(const std::vector<double>& x, int width);

// The measurement f(e, o) for exposure/gain sensors. Option axes are
// (log2-exposure in stops, gain multiplier); a one-axis option means gain 1.
// Per element: y = x * 2^E * G + eta with eta ~ Normal(0, (sigma0 +
// gain_noise * max(G-1, 0))^2), then moving-average blur, then clip with
// flags, then 8-bit quantization. Deterministic given (scene, option, model,
// seed). The scene's first modality named "visual" (or its first modality)
// is measured.
Observation measure(const AnalogScene& scene, const SensorOption& option,
                    const CaptureModel& model, std::uint64_t seed);

// Single-channel capture used by measure and by environment-specific sensors:
// y = (x - pivot) * scale + pivot + noise, blur, clip, quantize.
ObservationChannel capture_channel(const std::string& name,
                                   const std::vector<double>& analog,
                                   double scale, double pivot,
                                   double noise_sigma,
                                   const SensorOption& option, int blur_width,
                                   std::uint64_t seed);

// Multimodal measurement: each modality measured independently (seed offset
// by modality index), fused view = concatenation of per-modality vectors each
// pre-multiplied by its weight.
Observation measure_multi(const AnalogScene& scene,
                          const std::vector<SensorOption>& options,
                          const ModalityWeights& weights,
                          const std::vector<CaptureModel>& models,
                          std::uint64_t seed);

}  // namespace asl
