#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "asl/core.hpp"
#include "asl/learn.hpp"
#include "asl/perception.hpp"
#include "asl/rng.hpp"

namespace asl {

// Quality bucket: min(floor(q * buckets), buckets - 1).
int quality_bucket(double q, int buckets);

// Epsilon-greedy over one table row; ties broken by lowest index.
int epsilon_greedy(const QTable& table, int state, double epsilon, Rng& rng);

// Learned sensing policy: action-values over (quality bucket, previous
// option) -> next option.
class SensePolicyState {
 public:
  SensePolicyState(int quality_buckets, int option_count, double epsilon,
                   double alpha);

  int quality_buckets() const { return quality_buckets_; }
  int option_count() const { return option_count_; }
  double epsilon() const { return epsilon_; }
  double alpha() const { return alpha_; }

  int state_index(int bucket, int prev_option) const;

  QTable& table() { return table_; }
  const QTable& table() const { return table_; }

 private:
  int quality_buckets_;
  int option_count_;
  double epsilon_;
  double alpha_;
  QTable table_;
};

// Learned action policy: action-values over (observation bucket augmented
// with the quality bucket, previous action) -> action.
class ActionPolicyState {
 public:
  ActionPolicyState(int obs_buckets, int quality_buckets, int action_count,
                    double epsilon, double alpha);

  int obs_buckets() const { return obs_buckets_; }
  int quality_buckets() const { return quality_buckets_; }
  int action_count() const { return action_count_; }
  double epsilon() const { return epsilon_; }
  double alpha() const { return alpha_; }

  int state_index(int obs_bucket, int q_bucket, int prev_action) const;

  QTable& table() { return table_; }
  const QTable& table() const { return table_; }

 private:
  int obs_buckets_;
  int quality_buckets_;
  int action_count_;
  double epsilon_;
  double alpha_;
  QTable table_;
};

// k distinct grid options, uniform over size-k subsets, deterministic given
// seed (partial Fisher-Yates over grid indices).
std::vector<SensorOption> sample_candidates(const OptionSpace& space, int k,
                                            std::uint64_t seed);
std::vector<int> sample_candidate_indices(const OptionSpace& space, int k,
                                          std::uint64_t seed);

// Index of the candidate with maximal max-confidence quality; ties broken by
// lowest list index.
std::pair<int, QualityScore> select_single_shot(
    const std::vector<std::pair<SensorOption, Observation>>& candidates,
    const PerceptionModel& model);

// Epsilon-greedy next option for the perception-only and sensorimotor loops.
int sense_policy_step(const SensePolicyState& state, double quality,
                      int prev_option, std::uint64_t seed);

// Epsilon-greedy action conditioned on (obs bucket, quality bucket, previous
// action).
int action_policy_step(const ActionPolicyState& state, int obs_bucket,
                       int prev_action, double quality, std::uint64_t seed);

// Per-modality sensing step plus modality-weight update w ~ exp(tau * q),
// projected onto the simplex.
struct MultiSenseDecision {
  std::vector<int> option_indices;
  ModalityWeights weights;
};
MultiSenseDecision multi_sense_policy_step(
    std::vector<SensePolicyState>& states, double tau,
    const std::vector<double>& qualities, const std::vector<int>& prev_options,
    std::uint64_t seed);

// Flat text persistence: header with dimensions, then one row of decimal
// reals per table row.
void save_sense_policy(const SensePolicyState& state, const std::string& path);
SensePolicyState load_sense_policy(const std::string& path);
void save_action_policy(const ActionPolicyState& state, const std::string& path);
ActionPolicyState load_action_policy(const std::string& path);

}  // namespace asl
