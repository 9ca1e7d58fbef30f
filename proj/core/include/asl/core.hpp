#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace asl {

// One point in the p-dimensional sensing-parameter space. Axis semantics
// (what values[i] means) are declared by the owning OptionSpace.
struct SensorOption {
  std::vector<double> values;
  std::vector<int> axis_index;  // grid coordinates; empty when off-grid

  bool finite() const;
};

struct OptionAxis {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  int steps = 1;
};

// Finite rectangular grid over the sensing-parameter space. Enumeration is
// row-major over axes (last axis fastest) and stable across runs.
class OptionSpace {
 public:
  OptionSpace() = default;
  explicit OptionSpace(std::vector<OptionAxis> axes);

  const std::vector<OptionAxis>& axes() const { return axes_; }
  int total_size() const { return total_; }

  // Grid value on one axis: lower + i * (upper - lower) / (steps - 1);
  // a single-step axis sits at its lower bound.
  double axis_value(int axis, int i) const;

  SensorOption option_at(int flat_index) const;
  int flat_index(const std::vector<int>& coords) const;
  // Grid index of the option whose values are closest (euclidean) to `values`.
  int nearest_index(const std::vector<double>& values) const;

  bool contains(const SensorOption& option) const;

 private:
  std::vector<OptionAxis> axes_;
  int total_ = 0;
};

// All grid options in stable row-major order.
std::vector<SensorOption> option_space_enumerate(const OptionSpace& space);

// Simplex-constrained attention over N sensory modalities.
class ModalityWeights {
 public:
  ModalityWeights() : weights_{1.0} {}
  explicit ModalityWeights(std::vector<double> weights);  // validates

  const std::vector<double>& values() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }

 private:
  std::vector<double> weights_;
};

// Clamp negatives to zero, normalize to sum 1; uniform fallback when the
// clamped sum is zero. Total over all finite inputs.
ModalityWeights weights_project(const std::vector<double>& raw);

// Latent pre-capture signal, one feature vector per modality, plus scene
// nuisance context and optional ground truth.
struct ModalitySignal {
  std::string name;
  std::vector<double> values;
};

struct AnalogScene {
  std::vector<ModalitySignal> modalities;
  std::vector<double> context;
  std::optional<int> label;

  const ModalitySignal* find(const std::string& name) const;
};

// Digitized measurement of one modality: values on the 256-level grid in
// [0,1], per-element saturation flags, and the option that captured it.
struct ObservationChannel {
  std::string name;
  std::vector<double> values;
  std::vector<bool> clipped;  // true iff the pre-quantization value fell outside [0,1]
  SensorOption option;

  double clipped_fraction() const;
};

struct Observation {
  std::vector<ObservationChannel> channels;
  ModalityWeights weights;  // fusion weights; {1} for single-modality captures

  const ObservationChannel* find(const std::string& name) const;
  const ObservationChannel& primary() const { return channels.front(); }
  // Concatenation of per-modality vectors, each pre-multiplied by its weight.
  std::vector<double> fused_features() const;
};

enum class MetricId { kMaxConfidence, kGrip, kVisualAlignment };

std::string to_string(MetricId id);

// A perception-aware quality value in [0,1] tagged with its metric.
class QualityScore {
 public:
  QualityScore() = default;
  QualityScore(double value, MetricId metric);  // validates range

  double value() const { return value_; }
  MetricId metric() const { return metric_; }

 private:
  double value_ = 0.0;
  MetricId metric_ = MetricId::kMaxConfidence;
};

struct QualityTerm {
  MetricId metric = MetricId::kMaxConfidence;
  double lambda = 0.0;
  double q = 0.0;
};

// Composed reward: total = task + sum(lambda_i * q_i), stored exactly as
// compose_reward computed it.
struct RewardBreakdown {
  double task = 0.0;
  std::vector<QualityTerm> quality_terms;
  double total = 0.0;
};

struct StepRecord {
  int step = 0;
  Observation observation;
  std::optional<int> action;
  SensorOption option;
  int option_index = -1;  // flat grid index of `option` in its space
  std::optional<ModalityWeights> weights;
  std::vector<QualityScore> qualities;
  RewardBreakdown reward;
  bool done = false;
};

struct Trajectory {
  std::uint64_t seed = 0;
  std::vector<StepRecord> steps;
};

// Learner hyperparameters shared by the loop runners.
struct LearnerConfig {
  double gamma = 0.95;             // discount, [0,1)
  double alpha = 0.1;              // learning rate, (0,1]
  double epsilon = 0.1;            // exploration, [0,1]
  int candidates = 8;              // k, candidate sample size
  int quality_buckets = 4;         // B, quality discretization
  double weight_temperature = 4.0; // tau, modality-weight softmax

  void validate() const;  // throws std::invalid_argument naming the field
};

}  // namespace asl
