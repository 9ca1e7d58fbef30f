#include "asl/perception.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "asl/rng.hpp"

namespace asl {

void PerceptionModel::validate() const {
  if (classes < 2) throw std::invalid_argument("PerceptionModel: classes < 2");
  if (dim < 1) throw std::invalid_argument("PerceptionModel: dim < 1");
  if (weights.size() != static_cast<std::size_t>(classes) * dim ||
      bias.size() != static_cast<std::size_t>(classes)) {
    throw std::invalid_argument("PerceptionModel: inconsistent dimensions");
  }
  for (double w : weights) {
    if (!std::isfinite(w)) throw std::invalid_argument("PerceptionModel: non-finite weight");
  }
  for (double b : bias) {
    if (!std::isfinite(b)) throw std::invalid_argument("PerceptionModel: non-finite bias");
  }
}

std::vector<double> predict_features(const PerceptionModel& model,
                                     const std::vector<double>& features) {
  if (static_cast<int>(features.size()) != model.dim) {
    throw std::invalid_argument("predict: feature length mismatch");
  }
  std::vector<double> logits(static_cast<std::size_t>(model.classes));
  for (int c = 0; c < model.classes; ++c) {
    double z = model.bias[static_cast<std::size_t>(c)];
    const double* row = model.weights.data() + static_cast<std::size_t>(c) * model.dim;
    for (int j = 0; j < model.dim; ++j) z += row[j] * features[static_cast<std::size_t>(j)];
    logits[static_cast<std::size_t>(c)] = z;
  }
  const double peak = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& z : logits) {
    z = std::exp(z - peak);
    sum += z;
  }
  for (double& z : logits) z /= sum;
  return logits;
}

std::vector<double> predict(const PerceptionModel& model, const Observation& obs) {
  return predict_features(model, obs.fused_features());
}

int argmax(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("argmax: empty vector");
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(best)]) best = i;
  }
  return best;
}

QualityScore quality_max_confidence(const PerceptionModel& model,
                                    const Observation& obs) {
  const std::vector<double> p = predict(model, obs);
  return QualityScore(*std::max_element(p.begin(), p.end()),
                      MetricId::kMaxConfidence);
}

QualityScore quality_grip(const Observation& obs, int prev_action,
                          const SensorOption& tactile_option) {
  (void)prev_action;
  const ObservationChannel* tact = obs.find("tactile");
  if (tact == nullptr) throw std::invalid_argument("quality_grip: missing tactile modality");
  const double threshold =
      tactile_option.values.size() >= 2 ? tactile_option.values[1] : 0.0;
  if (tact->values.empty()) return QualityScore(0.0, MetricId::kGrip);
  std::size_t informative = 0;
  for (std::size_t i = 0; i < tact->values.size(); ++i) {
    if (!tact->clipped[i] && tact->values[i] >= threshold) ++informative;
  }
  return QualityScore(
      static_cast<double>(informative) / static_cast<double>(tact->values.size()),
      MetricId::kGrip);
}

QualityScore quality_visual_alignment(const Observation& obs, int prev_action,
                                      const SensorOption& cam_option,
                                      const SensorOption& tact_option,
                                      const PerceptionModel& model) {
  (void)prev_action;
  (void)cam_option;
  (void)tact_option;
  const ObservationChannel* vis = obs.find("visual");
  if (vis == nullptr) {
    throw std::invalid_argument("quality_visual_alignment: missing visual modality");
  }
  const std::vector<double> p = predict_features(model, vis->values);
  const double confidence = *std::max_element(p.begin(), p.end());
  return QualityScore(confidence * (1.0 - vis->clipped_fraction()),
                      MetricId::kVisualAlignment);
}

LossGrad logistic_loss_and_grad(const PerceptionModel& model,
                                const std::vector<std::vector<double>>& features,
                                const std::vector<int>& labels) {
  model.validate();
  if (features.empty() || features.size() != labels.size()) {
    throw std::invalid_argument("logistic_loss_and_grad: bad dataset");
  }
  const int C = model.classes;
  const int d = model.dim;
  LossGrad out;
  out.grad_weights.assign(static_cast<std::size_t>(C) * d, 0.0);
  out.grad_bias.assign(static_cast<std::size_t>(C), 0.0);
  const double inv_n = 1.0 / static_cast<double>(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const int y = labels[i];
    if (y < 0 || y >= C) throw std::invalid_argument("logistic_loss_and_grad: label out of range");
    const std::vector<double> p = predict_features(model, features[i]);
    out.loss -= inv_n * std::log(std::max(p[static_cast<std::size_t>(y)], 1e-300));
    for (int c = 0; c < C; ++c) {
      const double delta = (p[static_cast<std::size_t>(c)] - (c == y ? 1.0 : 0.0)) * inv_n;
      out.grad_bias[static_cast<std::size_t>(c)] += delta;
      double* grow = out.grad_weights.data() + static_cast<std::size_t>(c) * d;
      const std::vector<double>& x = features[i];
      for (int j = 0; j < d; ++j) grow[j] += delta * x[static_cast<std::size_t>(j)];
    }
  }
  return out;
}

double training_accuracy(const PerceptionModel& model,
                         const std::vector<std::vector<double>>& features,
                         const std::vector<int>& labels) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (argmax(predict_features(model, features[i])) == labels[i]) ++hit;
  }
  return features.empty() ? 0.0
                          : static_cast<double>(hit) / static_cast<double>(features.size());
}

PerceptionModel train_perception(
    const std::vector<std::pair<Observation, int>>& dataset, int classes,
    int epochs, double learning_rate, std::uint64_t seed) {
  if (dataset.empty()) throw std::invalid_argument("train_perception: empty dataset");
  if (classes < 2) throw std::invalid_argument("train_perception: classes < 2");

  std::vector<std::vector<double>> features;
  std::vector<int> labels;
  features.reserve(dataset.size());
  labels.reserve(dataset.size());
  for (const auto& [obs, label] : dataset) {
    if (label < 0 || label >= classes) {
      throw std::invalid_argument("train_perception: label out of range");
    }
    features.push_back(obs.fused_features());
    labels.push_back(label);
  }
  const int d = static_cast<int>(features.front().size());
  for (const auto& x : features) {
    if (static_cast<int>(x.size()) != d) {
      throw std::invalid_argument("train_perception: ragged features");
    }
  }

  PerceptionModel model;
  model.classes = classes;
  model.dim = d;
  model.weights.assign(static_cast<std::size_t>(classes) * d, 0.0);
  model.bias.assign(static_cast<std::size_t>(classes), 0.0);
  Rng rng(seed);
  for (double& w : model.weights) w = rng.normal(0.0, 0.01);

  for (int e = 0; e < epochs; ++e) {
    const LossGrad lg = logistic_loss_and_grad(model, features, labels);
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
      model.weights[i] -= learning_rate * lg.grad_weights[i];
    }
    for (std::size_t i = 0; i < model.bias.size(); ++i) {
      model.bias[i] -= learning_rate * lg.grad_bias[i];
    }
  }

  // A prior-only model scores exactly the majority-class accuracy; fall back
  // to it if the fit ended up below that floor.
  std::vector<double> counts(static_cast<std::size_t>(classes), 0.0);
  for (int y : labels) counts[static_cast<std::size_t>(y)] += 1.0;
  const double majority =
      *std::max_element(counts.begin(), counts.end()) /
      static_cast<double>(labels.size());
  if (training_accuracy(model, features, labels) < majority) {
    PerceptionModel prior;
    prior.classes = classes;
    prior.dim = d;
    prior.weights.assign(static_cast<std::size_t>(classes) * d, 0.0);
    prior.bias.assign(static_cast<std::size_t>(classes), 0.0);
    for (int c = 0; c < classes; ++c) {
      prior.bias[static_cast<std::size_t>(c)] =
          std::log(std::max(counts[static_cast<std::size_t>(c)], 0.5) /
                   static_cast<double>(labels.size()));
    }
    return prior;
  }
  return model;
}

void save_model(const PerceptionModel& model, const std::string& path) {
  model.validate();
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_model: cannot open " + path);
  f << model.classes << " " << model.dim << "\n";
  char buf[32];
  for (int c = 0; c < model.classes; ++c) {
    for (int j = 0; j < model.dim; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", model.weight(c, j));
      f << buf << " ";
    }
    std::snprintf(buf, sizeof(buf), "%.17g", model.bias[static_cast<std::size_t>(c)]);
    f << buf << "\n";
  }
  if (!f) throw std::runtime_error("save_model: write failed for " + path);
}

PerceptionModel load_model(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_model: cannot open " + path);
  PerceptionModel model;
  if (!(f >> model.classes >> model.dim)) {
    throw std::runtime_error("load_model: bad header in " + path);
  }
  if (model.classes < 2 || model.dim < 1) {
    throw std::runtime_error("load_model: bad dimensions in " + path);
  }
  model.weights.assign(static_cast<std::size_t>(model.classes) * model.dim, 0.0);
  model.bias.assign(static_cast<std::size_t>(model.classes), 0.0);
  for (int c = 0; c < model.classes; ++c) {
    for (int j = 0; j < model.dim; ++j) {
      if (!(f >> model.weights[static_cast<std::size_t>(c) * model.dim + j])) {
        throw std::runtime_error("load_model: truncated weights in " + path);
      }
    }
    if (!(f >> model.bias[static_cast<std::size_t>(c)])) {
      throw std::runtime_error("load_model: truncated bias in " + path);
    }
  }
  model.validate();
  return model;
}

}  // namespace asl
