#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asl/core.hpp"

namespace asl {

// Multinomial logistic classifier over observation features.
struct PerceptionModel {
  int classes = 0;               // C >= 2
  int dim = 0;                   // feature length d
  std::vector<double> weights;   // C x d, row-major
  std::vector<double> bias;      // C

  void validate() const;
  double weight(int c, int j) const { return weights[static_cast<std::size_t>(c) * dim + j]; }
};

// softmax(W x + b); entries positive, summing to 1.
std::vector<double> predict_features(const PerceptionModel& model,
                                     const std::vector<double>& features);
std::vector<double> predict(const PerceptionModel& model, const Observation& obs);

int argmax(const std::vector<double>& v);  // lowest-index tie-break

// Q = max softmax confidence of the fused observation.
QualityScore quality_max_confidence(const PerceptionModel& model,
                                    const Observation& obs);

// Informative contact coverage: fraction of tactile elements neither clipped
// nor below the option's pressure-threshold axis (axis 1; 0 when the option
// has a single axis). prev_action is accepted for signature parity with the
// sensing loops but does not enter the formula.
QualityScore quality_grip(const Observation& obs, int prev_action,
                          const SensorOption& tactile_option);

// Visual alignment: max-confidence of the visual channel times the unclipped
// fraction of its elements. The tactile option shaped the shared observation;
// it is accepted for signature parity.
QualityScore quality_visual_alignment(const Observation& obs, int prev_action,
                                      const SensorOption& cam_option,
                                      const SensorOption& tact_option,
                                      const PerceptionModel& model);

// Mean cross-entropy of the logistic model on (features, label) rows, plus
// its analytical gradient with respect to weights then bias (same layout as
// PerceptionModel). Exposed so tests can check the gradient against finite
// differences.
struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad_weights;
  std::vector<double> grad_bias;
};
LossGrad logistic_loss_and_grad(const PerceptionModel& model,
                                const std::vector<std::vector<double>>& features,
                                const std::vector<int>& labels);

// Full-batch gradient descent fit. Deterministic given seed; the returned
// model scores at least the majority-class accuracy on its training set
// (falls back to a class-prior model if the fit is worse).
PerceptionModel train_perception(
    const std::vector<std::pair<Observation, int>>& dataset, int classes,
    int epochs, double learning_rate, std::uint64_t seed);

double training_accuracy(const PerceptionModel& model,
                         const std::vector<std::vector<double>>& features,
                         const std::vector<int>& labels);

// Flat text model format: header line "C d", then C rows of d+1 reals
// (weights then bias), decimal ASCII.
void save_model(const PerceptionModel& model, const std::string& path);
PerceptionModel load_model(const std::string& path);

}  // namespace asl
