#include "asl/policies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace asl {

int quality_bucket(double q, int buckets) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("quality_bucket: q outside [0,1]");
  }
  const int b = static_cast<int>(q * buckets);
  return std::min(b, buckets - 1);
}

int epsilon_greedy(const QTable& table, int state, double epsilon, Rng& rng) {
  const double u = rng.uniform();
  if (u < epsilon) return rng.uniform_int(table.actions());
  return table.greedy_action(state);
}

SensePolicyState::SensePolicyState(int quality_buckets, int option_count,
                                   double epsilon, double alpha)
    : quality_buckets_(quality_buckets),
      option_count_(option_count),
      epsilon_(epsilon),
      alpha_(alpha),
      table_(quality_buckets * option_count, option_count) {
  if (quality_buckets < 1 || option_count < 1) {
    throw std::invalid_argument("SensePolicyState: bad dimensions");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0) || !(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("SensePolicyState: bad hyperparameters");
  }
}

int SensePolicyState::state_index(int bucket, int prev_option) const {
  if (bucket < 0 || bucket >= quality_buckets_ || prev_option < 0 ||
      prev_option >= option_count_) {
    throw std::out_of_range("SensePolicyState: state index");
  }
  return bucket * option_count_ + prev_option;
}

ActionPolicyState::ActionPolicyState(int obs_buckets, int quality_buckets,
                                     int action_count, double epsilon,
                                     double alpha)
    : obs_buckets_(obs_buckets),
      quality_buckets_(quality_buckets),
      action_count_(action_count),
      epsilon_(epsilon),
      alpha_(alpha),
      table_(obs_buckets * quality_buckets * action_count, action_count) {
  if (obs_buckets < 1 || quality_buckets < 1 || action_count < 1) {
    throw std::invalid_argument("ActionPolicyState: bad dimensions");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0) || !(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("ActionPolicyState: bad hyperparameters");
  }
}

int ActionPolicyState::state_index(int obs_bucket, int q_bucket,
                                   int prev_action) const {
  if (obs_bucket < 0 || obs_bucket >= obs_buckets_ || q_bucket < 0 ||
      q_bucket >= quality_buckets_ || prev_action < 0 ||
      prev_action >= action_count_) {
    throw std::out_of_range("ActionPolicyState: state index");
  }
  return (obs_bucket * quality_buckets_ + q_bucket) * action_count_ + prev_action;
}

std::vector<int> sample_candidate_indices(const OptionSpace& space, int k,
                                          std::uint64_t seed) {
  const int n = space.total_size();
  if (k < 1 || k > n) {
    throw std::invalid_argument("sample_candidates: k out of range");
  }
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (int i = 0; i < k; ++i) {
    const int j = i + rng.uniform_int(n - i);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

std::vector<SensorOption> sample_candidates(const OptionSpace& space, int k,
                                            std::uint64_t seed) {
  std::vector<SensorOption> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i : sample_candidate_indices(space, k, seed)) {
    out.push_back(space.option_at(i));
  }
  return out;
}

std::pair<int, QualityScore> select_single_shot(
    const std::vector<std::pair<SensorOption, Observation>>& candidates,
    const PerceptionModel& model) {
  if (candidates.empty()) {
    throw std::invalid_argument("select_single_shot: empty candidate list");
  }
  int best = 0;
  QualityScore best_q = quality_max_confidence(model, candidates[0].second);
  for (int i = 1; i < static_cast<int>(candidates.size()); ++i) {
    const QualityScore q =
        quality_max_confidence(model, candidates[static_cast<std::size_t>(i)].second);
    if (q.value() > best_q.value()) {
      best = i;
      best_q = q;
    }
  }
  return {best, best_q};
}

int sense_policy_step(const SensePolicyState& state, double quality,
                      int prev_option, std::uint64_t seed) {
  const int bucket = quality_bucket(quality, state.quality_buckets());
  Rng rng(seed);
  return epsilon_greedy(state.table(), state.state_index(bucket, prev_option),
                        state.epsilon(), rng);
}

int action_policy_step(const ActionPolicyState& state, int obs_bucket,
                       int prev_action, double quality, std::uint64_t seed) {
  const int bucket = quality_bucket(quality, state.quality_buckets());
  Rng rng(seed);
  return epsilon_greedy(state.table(),
                        state.state_index(obs_bucket, bucket, prev_action),
                        state.epsilon(), rng);
}

MultiSenseDecision multi_sense_policy_step(
    std::vector<SensePolicyState>& states, double tau,
    const std::vector<double>& qualities, const std::vector<int>& prev_options,
    std::uint64_t seed) {
  const std::size_t n = states.size();
  if (n == 0 || qualities.size() != n || prev_options.size() != n) {
    throw std::invalid_argument("multi_sense_policy_step: modality mismatch");
  }
  MultiSenseDecision out;
  out.option_indices.resize(n);
  std::vector<double> raw(n);
  for (std::size_t m = 0; m < n; ++m) {
    out.option_indices[m] = sense_policy_step(states[m], qualities[m],
                                              prev_options[m], mix_seed(seed, m));
    raw[m] = std::exp(tau * qualities[m]);
  }
  out.weights = weights_project(raw);
  return out;
}

void save_sense_policy(const SensePolicyState& state, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_sense_policy: cannot open " + path);
  char buf[32];
  f << state.quality_buckets() << " " << state.option_count();
  std::snprintf(buf, sizeof(buf), " %.17g", state.epsilon());
  f << buf;
  std::snprintf(buf, sizeof(buf), " %.17g", state.alpha());
  f << buf << "\n";
  for (int s = 0; s < state.table().states(); ++s) {
    for (int a = 0; a < state.table().actions(); ++a) {
      std::snprintf(buf, sizeof(buf), "%.17g", state.table().value(s, a));
      f << buf << (a + 1 == state.table().actions() ? "\n" : " ");
    }
  }
  if (!f) throw std::runtime_error("save_sense_policy: write failed for " + path);
}

SensePolicyState load_sense_policy(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_sense_policy: cannot open " + path);
  int buckets = 0, options = 0;
  double eps = 0.0, alpha = 0.0;
  if (!(f >> buckets >> options >> eps >> alpha)) {
    throw std::runtime_error("load_sense_policy: bad header in " + path);
  }
  SensePolicyState state(buckets, options, eps, alpha);
  for (int s = 0; s < state.table().states(); ++s) {
    for (int a = 0; a < state.table().actions(); ++a) {
      double v = 0.0;
      if (!(f >> v)) throw std::runtime_error("load_sense_policy: truncated " + path);
      state.table().set_value(s, a, v);
    }
  }
  return state;
}

void save_action_policy(const ActionPolicyState& state, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_action_policy: cannot open " + path);
  char buf[32];
  f << state.obs_buckets() << " " << state.quality_buckets() << " "
    << state.action_count();
  std::snprintf(buf, sizeof(buf), " %.17g", state.epsilon());
  f << buf;
  std::snprintf(buf, sizeof(buf), " %.17g", state.alpha());
  f << buf << "\n";
  for (int s = 0; s < state.table().states(); ++s) {
    for (int a = 0; a < state.table().actions(); ++a) {
      std::snprintf(buf, sizeof(buf), "%.17g", state.table().value(s, a));
      f << buf << (a + 1 == state.table().actions() ? "\n" : " ");
    }
  }
  if (!f) throw std::runtime_error("save_action_policy: write failed for " + path);
}

ActionPolicyState load_action_policy(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_action_policy: cannot open " + path);
  int obs = 0, buckets = 0, actions = 0;
  double eps = 0.0, alpha = 0.0;
  if (!(f >> obs >> buckets >> actions >> eps >> alpha)) {
    throw std::runtime_error("load_action_policy: bad header in " + path);
  }
  ActionPolicyState state(obs, buckets, actions, eps, alpha);
  for (int s = 0; s < state.table().states(); ++s) {
    for (int a = 0; a < state.table().actions(); ++a) {
      double v = 0.0;
      if (!(f >> v)) throw std::runtime_error("load_action_policy: truncated " + path);
      state.table().set_value(s, a, v);
    }
  }
  return state;
}

}  // namespace asl
