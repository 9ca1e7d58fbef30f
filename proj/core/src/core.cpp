#include "asl/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace asl {

bool SensorOption::finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

OptionSpace::OptionSpace(std::vector<OptionAxis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("OptionSpace: no axes");
  long long total = 1;
  for (const auto& ax : axes_) {
    if (!(ax.lower < ax.upper)) {
      throw std::invalid_argument("OptionSpace: axis '" + ax.name +
                                  "' requires lower < upper");
    }
    if (ax.steps < 1) {
      throw std::invalid_argument("OptionSpace: axis '" + ax.name +
                                  "' requires steps >= 1");
    }
    total *= ax.steps;
    if (total > std::numeric_limits<int>::max()) {
      throw std::invalid_argument("OptionSpace: grid too large");
    }
  }
  total_ = static_cast<int>(total);
}

double OptionSpace::axis_value(int axis, int i) const {
  const auto& ax = axes_.at(static_cast<std::size_t>(axis));
  if (i < 0 || i >= ax.steps) throw std::out_of_range("OptionSpace: axis step");
  if (ax.steps == 1) return ax.lower;
  return ax.lower + static_cast<double>(i) * (ax.upper - ax.lower) /
                        static_cast<double>(ax.steps - 1);
}

SensorOption OptionSpace::option_at(int flat_index) const {
  if (flat_index < 0 || flat_index >= total_) {
    throw std::out_of_range("OptionSpace: flat index");
  }
  const int n = static_cast<int>(axes_.size());
  SensorOption opt;
  opt.values.resize(axes_.size());
  opt.axis_index.resize(axes_.size());
  int rem = flat_index;
  for (int a = n - 1; a >= 0; --a) {
    const int steps = axes_[static_cast<std::size_t>(a)].steps;
    const int idx = rem % steps;
    rem /= steps;
    opt.axis_index[static_cast<std::size_t>(a)] = idx;
    opt.values[static_cast<std::size_t>(a)] = axis_value(a, idx);
  }
  return opt;
}

int OptionSpace::flat_index(const std::vector<int>& coords) const {
  if (coords.size() != axes_.size()) {
    throw std::invalid_argument("OptionSpace: coordinate arity mismatch");
  }
  int flat = 0;
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    const int steps = axes_[a].steps;
    const int idx = coords[a];
    if (idx < 0 || idx >= steps) throw std::out_of_range("OptionSpace: coordinate");
    flat = flat * steps + idx;
  }
  return flat;
}

int OptionSpace::nearest_index(const std::vector<double>& values) const {
  if (values.size() != axes_.size()) {
    throw std::invalid_argument("OptionSpace: value arity mismatch");
  }
  std::vector<int> coords(axes_.size());
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < axes_[a].steps; ++i) {
      const double d = std::abs(axis_value(static_cast<int>(a), i) - values[a]);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    coords[a] = best;
  }
  return flat_index(coords);
}

bool OptionSpace::contains(const SensorOption& option) const {
  if (option.values.size() != axes_.size() || !option.finite()) return false;
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    if (option.values[a] < axes_[a].lower || option.values[a] > axes_[a].upper) {
      return false;
    }
  }
  return true;
}

std::vector<SensorOption> option_space_enumerate(const OptionSpace& space) {
  std::vector<SensorOption> out;
  out.reserve(static_cast<std::size_t>(space.total_size()));
  for (int i = 0; i < space.total_size(); ++i) out.push_back(space.option_at(i));
  return out;
}

ModalityWeights::ModalityWeights(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("no modalities");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw std::invalid_argument("ModalityWeights: weight outside [0,1]");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("ModalityWeights: weights must sum to 1");
  }
}

ModalityWeights weights_project(const std::vector<double>& raw) {
  if (raw.empty()) throw std::invalid_argument("no modalities");
  std::vector<double> w(raw.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i])) {
      throw std::invalid_argument("weights_project: non-finite input");
    }
    w[i] = raw[i] > 0.0 ? raw[i] : 0.0;
    peak = std::max(peak, w[i]);
  }
  if (peak <= 0.0) {
    const double u = 1.0 / static_cast<double>(w.size());
    for (double& x : w) x = u;
    return ModalityWeights(std::move(w));
  }
  // Scale by the peak before summing so extreme magnitudes cannot overflow.
  double sum = 0.0;
  for (double& x : w) {
    x /= peak;
    sum += x;
  }
  for (double& x : w) x /= sum;
  return ModalityWeights(std::move(w));
}

const ModalitySignal* AnalogScene::find(const std::string& name) const {
  for (const auto& m : modalities) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

double ObservationChannel::clipped_fraction() const {
  if (clipped.empty()) return 0.0;
  std::size_t n = 0;
  for (bool c : clipped) {
    if (c) ++n;
  }
  return static_cast<double>(n) / static_cast<double>(clipped.size());
}

const ObservationChannel* Observation::find(const std::string& name) const {
  for (const auto& c : channels) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<double> Observation::fused_features() const {
  std::vector<double> out;
  std::size_t total = 0;
  for (const auto& c : channels) total += c.values.size();
  out.reserve(total);
  for (std::size_t n = 0; n < channels.size(); ++n) {
    const double w = n < weights.size() ? weights[n] : 1.0;
    for (double v : channels[n].values) out.push_back(w * v);
  }
  return out;
}

std::string to_string(MetricId id) {
  switch (id) {
    case MetricId::kMaxConfidence: return "max-confidence";
    case MetricId::kGrip: return "grip";
    case MetricId::kVisualAlignment: return "visual-alignment";
  }
  return "unknown";
}

QualityScore::QualityScore(double value, MetricId metric)
    : value_(value), metric_(metric) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument("QualityScore: value outside [0,1]");
  }
}

void LearnerConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("learner.gamma must be in [0,1)");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("learner.alpha must be in (0,1]");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("learner.epsilon must be in [0,1]");
  }
  if (candidates < 1) throw std::invalid_argument("learner.k must be >= 1");
  if (quality_buckets < 1) {
    throw std::invalid_argument("learner.buckets must be >= 1");
  }
  if (!(weight_temperature >= 0.0) || !std::isfinite(weight_temperature)) {
    throw std::invalid_argument("learner.tau must be finite and >= 0");
  }
}

}  // namespace asl
