#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "asl/core.hpp"
#include "asl/sensing.hpp"

namespace asl {

enum class EnvKind {
  kSceneClassification,  // single-shot, T = 1
  kDriftingPerception,   // lighting random walk, action-free
  kBalance,              // linearized pole balancing, range sensor
  kGrip,                 // sparse-reward cap turning, tactile + visual
};

std::string to_string(EnvKind kind);
EnvKind env_kind_from_string(const std::string& name);

// Environment family description: dynamics parameters plus the per-modality
// sensing grid and capture model. The family seed pins class prototypes and
// patterns so train/test splits share them.
struct EnvSpec {
  EnvKind kind = EnvKind::kSceneClassification;
  int horizon = 1;
  int action_count = 0;
  std::vector<std::string> modality_names;
  std::vector<OptionSpace> option_spaces;
  std::vector<CaptureModel> capture_models;
  std::vector<int> fixed_option_index;  // o_fixed per modality
  std::uint64_t family_seed = 7;

  // scene-classification / drifting-perception
  int feature_dim = 16;
  int classes = 4;
  double lighting_min = -3.0;
  double lighting_max = 3.0;
  double lighting_sigma = 0.5;   // drifting random walk step
  double lighting_clamp = 4.0;   // walk clamped to +/- this
  double feature_noise = 0.02;

  // balance
  double dynamics_noise = 0.01;
  double force_mag = 10.0;
  double theta_limit = 0.21;

  // grip
  double grip_dphi = 0.08;
  double grip_phi_threshold = 1.0;

  int num_modalities() const { return static_cast<int>(option_spaces.size()); }
  bool action_free() const { return action_count == 0; }
  void validate() const;
};

// Per-kind defaults (grids, capture models, horizons, o_fixed).
EnvSpec default_env_spec(EnvKind kind);

// Owns the latent environment state for one episode.
class Env {
 public:
  explicit Env(EnvSpec spec);

  const EnvSpec& spec() const { return spec_; }

  // Deterministic initial latent state; returns the first analog scene.
  AnalogScene reset(std::uint64_t seed);

  struct StepResult {
    AnalogScene scene;
    double task_reward = 0.0;
    bool done = false;
  };
  // Kind-specific transition. Perception-only kinds must be stepped without
  // an action; acting kinds require one. Perception-kind task reward
  // (classification correctness) is attributed by the loop, which owns the
  // perception model.
  StepResult step(std::optional<int> action, std::uint64_t seed);

  // Measurement with this environment's option semantics. Side-effect-free:
  // candidate re-captures of the same scene do not advance the environment.
  Observation capture(const AnalogScene& scene, int option_index,
                      std::uint64_t seed) const;
  Observation capture_multi(const AnalogScene& scene,
                            const std::vector<int>& option_indices,
                            const ModalityWeights& weights,
                            std::uint64_t seed) const;

  // Discretization of observations for the tabular action policy.
  int observation_bucket_count() const;
  int observation_bucket(const Observation& obs) const;

  // Scene synthesis from explicit latents (dataset builders, tests).
  AnalogScene scene_for_class(int label, double lighting,
                              std::uint64_t seed) const;
  AnalogScene scene_for_state(const std::array<double, 4>& state) const;
  AnalogScene scene_for_grip(double phi, double grip, std::uint64_t seed) const;

  // Latent introspection.
  int current_label() const { return label_; }
  double current_lighting() const { return lighting_; }
  const std::array<double, 4>& balance_state() const { return state_; }
  double grip_angle() const { return phi_; }
  double grip_engagement() const { return grip_; }

 private:
  AnalogScene current_scene_for_kind(std::uint64_t seed) const;

  EnvSpec spec_;
  std::vector<std::vector<double>> prototypes_;  // scene kinds, C x d

  int label_ = 0;
  double lighting_ = 0.0;
  std::array<double, 4> state_{};  // balance: x, x_dot, theta, theta_dot
  double phi_ = 0.0;               // grip: cap angle
  double grip_ = 0.0;              // grip: engagement
};

// Labeled captures for fitting the designated perception model of a kind:
// scene kinds -> class labels at o_fixed under near-nominal lighting;
// balance -> pole-angle terciles at random states and options;
// grip -> visual alignment (phi past half threshold) at random options.
std::vector<std::pair<Observation, int>> make_training_dataset(
    const EnvSpec& spec, int samples, std::uint64_t seed);

// Class count of the dataset above.
int training_class_count(const EnvSpec& spec);

}  // namespace asl
