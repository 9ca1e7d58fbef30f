#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "asl/core.hpp"
#include "asl/envs.hpp"
#include "asl/perception.hpp"
#include "asl/policies.hpp"

namespace asl {

// Per-purpose stream tags. Each consumer draws from its own stream derived
// as mix_seed(episode_seed, tag, step), so policy randomness never perturbs
// environment or measurement draws.
namespace stream {
inline constexpr std::uint64_t kReset = 0;
inline constexpr std::uint64_t kEnv = 1;
inline constexpr std::uint64_t kMeasure = 2;
inline constexpr std::uint64_t kActionPolicy = 3;
inline constexpr std::uint64_t kSensePolicy = 4;
inline constexpr std::uint64_t kCandidates = 5;
inline constexpr std::uint64_t kCandidateCapture = 6;
inline constexpr std::uint64_t kFinalCapture = 7;
}  // namespace stream

inline std::uint64_t stream_seed(std::uint64_t episode_seed, std::uint64_t tag,
                                 std::uint64_t step = 0) {
  return mix_seed(episode_seed, tag, step);
}

// total = task + sum_i lambda_i * q_i, accumulated in list order.
RewardBreakdown compose_reward(
    double task, const std::vector<std::pair<double, QualityScore>>& terms);

// Re-derives total from the stored parts with the same summation order.
double recompute_total(const RewardBreakdown& breakdown);

// Fixed-sensing action loop: o_fixed every step, Q-learning on the action
// table from the task reward alone.
Trajectory run_conventional(const EnvSpec& spec, ActionPolicyState& policy,
                            const LearnerConfig& config,
                            std::uint64_t episode_seed);

// One single-shot adaptive-sensing episode: sample k candidate options,
// capture each against the frozen latent scene, keep the argmax-quality
// option and re-capture with it.
struct SelectionRecord {
  std::uint64_t seed = 0;
  int chosen_candidate = -1;       // index into the sampled candidate list
  int chosen_option_index = -1;    // flat grid index
  SensorOption option;
  Observation observation;         // final re-capture at the chosen option
  std::vector<double> prediction;
  int predicted_label = -1;
  int true_label = -1;
  bool correct = false;
  double chosen_quality = 0.0;
  std::vector<int> candidate_option_indices;
  std::vector<double> candidate_qualities;
};
SelectionRecord run_single_shot(const EnvSpec& spec, int k,
                                const PerceptionModel& model,
                                std::uint64_t episode_seed);

// Fixed-sensing baseline for perception-only kinds: capture with o_fixed
// every step, no sensing agent.
Trajectory run_fixed_sensing(const EnvSpec& spec, const PerceptionModel& model,
                             std::uint64_t episode_seed);

// Perception-only continuous loop. The sensing table learns by Q-learning
// with reward = quality of the observation the chosen option produced.
// `pinned_option` bypasses the learned policy (baselines, equivalence tests).
Trajectory run_perception_only(const EnvSpec& spec, SensePolicyState& policy,
                               const PerceptionModel& model,
                               const LearnerConfig& config,
                               std::uint64_t episode_seed,
                               std::optional<int> pinned_option = std::nullopt);

// How the sensorimotor loop picks options each step.
struct SensingMode {
  enum Kind { kLearned, kPinned, kUniformRandom } kind = kLearned;
  int pinned_index = 0;

  static SensingMode learned() { return {kLearned, 0}; }
  static SensingMode pinned(int index) { return {kPinned, index}; }
  static SensingMode uniform_random() { return {kUniformRandom, 0}; }
};

// Joint action + sensing loop with composite reward task + lambda * Q_M.
// With use_quality = false the quality metric is ignored entirely (bucket 0,
// no quality terms), which reduces the loop to the conventional one.
Trajectory run_sensorimotor(const EnvSpec& spec, ActionPolicyState& action_policy,
                            SensePolicyState& sense_policy, double lambda,
                            const PerceptionModel& model,
                            const LearnerConfig& config,
                            std::uint64_t episode_seed,
                            SensingMode mode = SensingMode::learned(),
                            bool use_quality = true);

// Multimodal sparse-reward loop on the grip task:
// R = R_sparse + lambda_tact * Q_grip + lambda_vis * Q_vis, per-modality
// sensing policies plus the quality-softmax weight update.
Trajectory run_multimodal_sparse(const EnvSpec& spec,
                                 ActionPolicyState& action_policy,
                                 std::vector<SensePolicyState>& sense_policies,
                                 double lambda_tact, double lambda_vis,
                                 const PerceptionModel& alignment_model,
                                 const LearnerConfig& config,
                                 std::uint64_t episode_seed);

}  // namespace asl
