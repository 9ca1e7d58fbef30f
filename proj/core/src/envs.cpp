#include "asl/envs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "asl/rng.hpp"

namespace asl {

namespace {

// Balance nominal full-scale ranges mapping state components into [0,1].
constexpr std::array<double, 4> kBalanceNominal = {2.4, 3.0, 0.21, 3.0};

// Grip sensor patterns.
constexpr std::array<double, 8> kGripBump = {0.15, 0.40, 0.70, 0.85,
                                             0.85, 0.70, 0.40, 0.15};
constexpr std::array<double, 8> kGripPeak = {0.10, 0.80, 0.10, 0.80,
                                             0.10, 0.80, 0.10, 0.80};
constexpr double kGripFlat = 0.45;

int value_bin(double v, int bins) {
  const int b = static_cast<int>(v * bins);
  return std::clamp(b, 0, bins - 1);
}

}  // namespace

std::string to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::kSceneClassification: return "scene-classification";
    case EnvKind::kDriftingPerception: return "drifting-perception";
    case EnvKind::kBalance: return "balance";
    case EnvKind::kGrip: return "grip";
  }
  return "unknown";
}

EnvKind env_kind_from_string(const std::string& name) {
  if (name == "scene-classification") return EnvKind::kSceneClassification;
  if (name == "drifting-perception") return EnvKind::kDriftingPerception;
  if (name == "balance") return EnvKind::kBalance;
  if (name == "grip") return EnvKind::kGrip;
  throw std::invalid_argument("unknown env kind: " + name);
}

void EnvSpec::validate() const {
  if (horizon < 1) throw std::invalid_argument("env.horizon must be >= 1");
  const int n = num_modalities();
  if (n < 1 || modality_names.size() != static_cast<std::size_t>(n) ||
      capture_models.size() != static_cast<std::size_t>(n) ||
      fixed_option_index.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("env: per-modality arrays inconsistent");
  }
  for (int m = 0; m < n; ++m) {
    capture_models[static_cast<std::size_t>(m)].validate();
    const int fixed = fixed_option_index[static_cast<std::size_t>(m)];
    if (fixed < 0 || fixed >= option_spaces[static_cast<std::size_t>(m)].total_size()) {
      throw std::invalid_argument("env: fixed option index out of range");
    }
  }
  const bool perception_only = kind == EnvKind::kSceneClassification ||
                               kind == EnvKind::kDriftingPerception;
  if (perception_only && action_count != 0) {
    throw std::invalid_argument("env: perception-only kinds take no actions");
  }
  if (!perception_only && action_count < 1) {
    throw std::invalid_argument("env: acting kinds need actions");
  }
  if (kind == EnvKind::kGrip && n != 2) {
    throw std::invalid_argument("env: grip needs tactile and visual modalities");
  }
  if ((kind == EnvKind::kSceneClassification ||
       kind == EnvKind::kDriftingPerception) &&
      (feature_dim < 1 || classes < 2)) {
    throw std::invalid_argument("env: bad scene dimensions");
  }
}

EnvSpec default_env_spec(EnvKind kind) {
  EnvSpec spec;
  spec.kind = kind;
  switch (kind) {
    case EnvKind::kSceneClassification:
    case EnvKind::kDriftingPerception: {
      spec.horizon = kind == EnvKind::kSceneClassification ? 1 : 50;
      spec.action_count = 0;
      spec.modality_names = {"visual"};
      spec.option_spaces = {OptionSpace({{"exposure_stops", -4.0, 4.0, 5},
                                         {"gain", 1.0, 4.0, 5}})};
      CaptureModel cm;
      cm.sigma0 = 0.01;
      cm.gain_noise = 0.02;
      cm.blur_width = 1;
      spec.capture_models = {cm};
      spec.fixed_option_index = {spec.option_spaces[0].nearest_index({0.0, 1.0})};
      break;
    }
    case EnvKind::kBalance: {
      spec.horizon = 200;
      spec.action_count = 2;
      spec.modality_names = {"state"};
      spec.option_spaces = {OptionSpace({{"range", 0.25, 2.0, 8}})};
      CaptureModel cm;
      cm.sigma0 = 0.06;
      cm.blur_width = 1;
      spec.capture_models = {cm};
      spec.fixed_option_index = {spec.option_spaces[0].nearest_index({1.0})};
      break;
    }
    case EnvKind::kGrip: {
      spec.horizon = 60;
      spec.action_count = 3;  // turn, regrip, release
      spec.modality_names = {"tactile", "visual"};
      spec.option_spaces = {
          OptionSpace({{"sensitivity_stops", -2.0, 2.0, 3},
                       {"threshold", 0.0, 0.6, 3}}),
          OptionSpace({{"exposure_stops", -2.0, 2.0, 5}}),
      };
      CaptureModel tact;
      tact.sigma0 = 0.02;
      CaptureModel vis;
      vis.sigma0 = 0.02;
      spec.capture_models = {tact, vis};
      spec.fixed_option_index = {
          spec.option_spaces[0].nearest_index({0.0, 0.3}),
          spec.option_spaces[1].nearest_index({0.0}),
      };
      break;
    }
  }
  spec.validate();
  return spec;
}

Env::Env(EnvSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  if (spec_.kind == EnvKind::kSceneClassification ||
      spec_.kind == EnvKind::kDriftingPerception) {
    Rng rng(mix_seed(spec_.family_seed, 0xA5C3));
    prototypes_.assign(static_cast<std::size_t>(spec_.classes), {});
    for (auto& proto : prototypes_) {
      proto.resize(static_cast<std::size_t>(spec_.feature_dim));
      for (double& v : proto) v = rng.uniform(0.15, 0.95);
    }
  }
}

AnalogScene Env::scene_for_class(int label, double lighting,
                                 std::uint64_t seed) const {
  if (label < 0 || label >= spec_.classes) {
    throw std::invalid_argument("scene_for_class: label out of range");
  }
  Rng rng(seed);
  const std::vector<double>& proto = prototypes_[static_cast<std::size_t>(label)];
  AnalogScene scene;
  scene.label = label;
  scene.context = {lighting};
  ModalitySignal sig;
  sig.name = "visual";
  sig.values.resize(proto.size());
  const double scale = std::exp2(lighting);
  for (std::size_t i = 0; i < proto.size(); ++i) {
    sig.values[i] = proto[i] * scale + rng.normal(0.0, spec_.feature_noise);
  }
  scene.modalities.push_back(std::move(sig));
  return scene;
}

AnalogScene Env::scene_for_state(const std::array<double, 4>& state) const {
  AnalogScene scene;
  scene.context = {state[0], state[1], state[2], state[3]};
  ModalitySignal sig;
  sig.name = "state";
  sig.values.resize(4);
  for (std::size_t i = 0; i < 4; ++i) {
    sig.values[i] = 0.5 + 0.5 * state[i] / kBalanceNominal[i];
  }
  scene.modalities.push_back(std::move(sig));
  return scene;
}

AnalogScene Env::scene_for_grip(double phi, double grip,
                                std::uint64_t seed) const {
  Rng rng(seed);
  AnalogScene scene;
  scene.context = {phi, grip};
  ModalitySignal tact;
  tact.name = "tactile";
  tact.values.resize(kGripBump.size());
  for (std::size_t i = 0; i < kGripBump.size(); ++i) {
    tact.values[i] = grip * kGripBump[i] + rng.normal(0.0, 0.01);
  }
  ModalitySignal vis;
  vis.name = "visual";
  vis.values.resize(kGripPeak.size());
  const double sharp = std::clamp(phi / spec_.grip_phi_threshold, 0.0, 1.0);
  for (std::size_t i = 0; i < kGripPeak.size(); ++i) {
    vis.values[i] =
        (1.0 - sharp) * kGripFlat + sharp * kGripPeak[i] + rng.normal(0.0, 0.01);
  }
  scene.modalities.push_back(std::move(tact));
  scene.modalities.push_back(std::move(vis));
  return scene;
}

AnalogScene Env::reset(std::uint64_t seed) {
  Rng rng(seed);
  switch (spec_.kind) {
    case EnvKind::kSceneClassification:
    case EnvKind::kDriftingPerception: {
      label_ = rng.uniform_int(spec_.classes);
      lighting_ = rng.uniform(spec_.lighting_min, spec_.lighting_max);
      return scene_for_class(label_, lighting_, rng.next_u64());
    }
    case EnvKind::kBalance: {
      for (double& v : state_) v = rng.uniform(-0.05, 0.05);
      return scene_for_state(state_);
    }
    case EnvKind::kGrip: {
      phi_ = 0.0;
      grip_ = 0.0;
      return scene_for_grip(phi_, grip_, rng.next_u64());
    }
  }
  throw std::logic_error("unreachable");
}

Env::StepResult Env::step(std::optional<int> action, std::uint64_t seed) {
  Rng rng(seed);
  StepResult out;
  switch (spec_.kind) {
    case EnvKind::kSceneClassification: {
      if (action.has_value()) {
        throw std::invalid_argument("env_step: action on an action-free kind");
      }
      // P'_E is the identity on the frozen latent scene.
      out.scene = scene_for_class(label_, lighting_, rng.next_u64());
      out.done = true;
      return out;
    }
    case EnvKind::kDriftingPerception: {
      if (action.has_value()) {
        throw std::invalid_argument("env_step: action on an action-free kind");
      }
      lighting_ += rng.normal(0.0, spec_.lighting_sigma);
      lighting_ = std::clamp(lighting_, -spec_.lighting_clamp, spec_.lighting_clamp);
      out.scene = scene_for_class(label_, lighting_, rng.next_u64());
      out.done = false;
      return out;
    }
    case EnvKind::kBalance: {
      if (!action.has_value()) {
        throw std::invalid_argument("env_step: balance requires an action");
      }
      if (*action < 0 || *action >= spec_.action_count) {
        throw std::invalid_argument("env_step: action out of range");
      }
      // Linearized pole-on-cart dynamics, Euler step at tau = 0.02:
      //   theta_acc = (g*theta - F/M) / (l*(4/3 - m_p/M))
      //   x_acc     = F/M - (m_p*l/M) * theta_acc
      // with g=9.8, m_c=1.0, m_p=0.1, M=1.1, l=0.5, F = +/- force_mag.
      constexpr double kGravity = 9.8;
      constexpr double kMassPole = 0.1;
      constexpr double kMassTotal = 1.1;
      constexpr double kPoleHalfLength = 0.5;
      constexpr double kTau = 0.02;
      const double force = (*action == 1 ? 1.0 : -1.0) * spec_.force_mag;
      const double denom =
          kPoleHalfLength * (4.0 / 3.0 - kMassPole / kMassTotal);
      const double theta_acc =
          (kGravity * state_[2] - force / kMassTotal) / denom;
      const double x_acc =
          force / kMassTotal -
          kMassPole * kPoleHalfLength / kMassTotal * theta_acc;
      state_[0] += kTau * state_[1];
      state_[1] += kTau * x_acc;
      state_[2] += kTau * state_[3];
      state_[3] += kTau * theta_acc;
      for (double& v : state_) v += rng.normal(0.0, spec_.dynamics_noise);
      out.scene = scene_for_state(state_);
      out.done = std::abs(state_[2]) > spec_.theta_limit;
      out.task_reward = out.done ? 0.0 : 1.0;
      return out;
    }
    case EnvKind::kGrip: {
      if (!action.has_value()) {
        throw std::invalid_argument("env_step: grip requires an action");
      }
      switch (*action) {
        case 0:  // turn
          phi_ += spec_.grip_dphi * grip_;
          break;
        case 1:  // regrip
          grip_ = rng.uniform(0.5, 1.0);
          break;
        case 2:  // release
          grip_ = 0.0;
          break;
        default:
          throw std::invalid_argument("env_step: action out of range");
      }
      out.done = phi_ >= spec_.grip_phi_threshold;
      out.task_reward = out.done ? 1.0 : 0.0;  // sparse success, exactly once
      out.scene = scene_for_grip(phi_, grip_, rng.next_u64());
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

Observation Env::capture(const AnalogScene& scene, int option_index,
                         std::uint64_t seed) const {
  if (spec_.kind == EnvKind::kGrip) {
    throw std::invalid_argument("capture: grip is multimodal; use capture_multi");
  }
  const OptionSpace& space = spec_.option_spaces[0];
  const SensorOption option = space.option_at(option_index);
  const CaptureModel& model = spec_.capture_models[0];
  switch (spec_.kind) {
    case EnvKind::kSceneClassification:
    case EnvKind::kDriftingPerception:
      return measure(scene, option, model, seed);
    case EnvKind::kBalance: {
      // Range sensor: gain 1/r around mid-scale; values outside +/- r/2 of
      // mid-scale clip, in-range resolution is proportional to r.
      const double range = option.values[0];
      Observation obs;
      obs.channels.push_back(capture_channel(
          "state", scene.modalities[0].values, 1.0 / range, 0.5, model.sigma0,
          option, model.blur_width, seed));
      return obs;
    }
    default:
      throw std::logic_error("unreachable");
  }
}

Observation Env::capture_multi(const AnalogScene& scene,
                               const std::vector<int>& option_indices,
                               const ModalityWeights& weights,
                               std::uint64_t seed) const {
  if (spec_.kind != EnvKind::kGrip) {
    throw std::invalid_argument("capture_multi: only grip is multimodal");
  }
  if (option_indices.size() != 2 || weights.size() != 2) {
    throw std::invalid_argument("capture_multi: modality count mismatch");
  }
  const SensorOption tact_opt =
      spec_.option_spaces[0].option_at(option_indices[0]);
  const SensorOption vis_opt =
      spec_.option_spaces[1].option_at(option_indices[1]);

  Observation obs;
  obs.weights = weights;
  // Tactile axes are (log2-sensitivity, pressure threshold); the threshold
  // axis feeds quality_grip, not the capture gain.
  obs.channels.push_back(capture_channel(
      "tactile", scene.modalities[0].values, std::exp2(tact_opt.values[0]),
      0.0, spec_.capture_models[0].sigma0, tact_opt,
      spec_.capture_models[0].blur_width, seed));
  obs.channels.push_back(capture_channel(
      "visual", scene.modalities[1].values, std::exp2(vis_opt.values[0]), 0.0,
      spec_.capture_models[1].sigma0, vis_opt,
      spec_.capture_models[1].blur_width, seed + 1));
  return obs;
}

int Env::observation_bucket_count() const {
  switch (spec_.kind) {
    case EnvKind::kBalance: return 3 * 6 * 3;
    case EnvKind::kGrip: return 4 * 4;
    default: return 1;
  }
}

int Env::observation_bucket(const Observation& obs) const {
  switch (spec_.kind) {
    case EnvKind::kBalance: {
      const std::vector<double>& v = obs.channels.at(0).values;
      const int b_xdot = value_bin(v.at(1), 3);
      const int b_theta = value_bin(v.at(2), 6);
      const int b_tdot = value_bin(v.at(3), 3);
      return (b_xdot * 6 + b_theta) * 3 + b_tdot;
    }
    case EnvKind::kGrip: {
      const ObservationChannel* tact = obs.find("tactile");
      const ObservationChannel* vis = obs.find("visual");
      if (tact == nullptr || vis == nullptr) {
        throw std::invalid_argument("observation_bucket: missing modality");
      }
      auto mean = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v;
        return x.empty() ? 0.0 : s / static_cast<double>(x.size());
      };
      return value_bin(mean(tact->values), 4) * 4 + value_bin(mean(vis->values), 4);
    }
    default:
      return 0;
  }
}

int training_class_count(const EnvSpec& spec) {
  switch (spec.kind) {
    case EnvKind::kSceneClassification:
    case EnvKind::kDriftingPerception:
      return spec.classes;
    case EnvKind::kBalance:
      return 3;  // pole-angle terciles: left, centered, right
    case EnvKind::kGrip:
      return 2;  // aligned vs not
  }
  return 0;
}

std::vector<std::pair<Observation, int>> make_training_dataset(
    const EnvSpec& spec, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("make_training_dataset: samples < 1");
  Env env(spec);
  Rng rng(seed);
  std::vector<std::pair<Observation, int>> out;
  out.reserve(static_cast<std::size_t>(samples));
  switch (spec.kind) {
    case EnvKind::kSceneClassification:
    case EnvKind::kDriftingPerception: {
      // Near-nominal lighting at o_fixed: the deployment-time lighting shift
      // is the covariate shift the adaptive runs must absorb.
      for (int i = 0; i < samples; ++i) {
        const int label = rng.uniform_int(spec.classes);
        const double lighting = rng.normal(0.0, 0.5);
        const AnalogScene scene =
            env.scene_for_class(label, lighting, rng.next_u64());
        out.emplace_back(
            env.capture(scene, spec.fixed_option_index[0], rng.next_u64()),
            label);
      }
      break;
    }
    case EnvKind::kBalance: {
      for (int i = 0; i < samples; ++i) {
        std::array<double, 4> st{};
        st[0] = rng.uniform(-1.9, 1.9);
        st[1] = rng.uniform(-2.4, 2.4);
        st[2] = rng.uniform(-0.21, 0.21);
        st[3] = rng.uniform(-2.4, 2.4);
        const int label = st[2] < -0.07 ? 0 : (st[2] <= 0.07 ? 1 : 2);
        const AnalogScene scene = env.scene_for_state(st);
        const int option = rng.uniform_int(spec.option_spaces[0].total_size());
        out.emplace_back(env.capture(scene, option, rng.next_u64()), label);
      }
      break;
    }
    case EnvKind::kGrip: {
      for (int i = 0; i < samples; ++i) {
        const double phi = rng.uniform(0.0, spec.grip_phi_threshold * 1.2);
        const double grip = rng.uniform(0.0, 1.0);
        const int label = phi >= 0.5 * spec.grip_phi_threshold ? 1 : 0;
        const AnalogScene scene = env.scene_for_grip(phi, grip, rng.next_u64());
        const int vis_option =
            rng.uniform_int(spec.option_spaces[1].total_size());
        const Observation full = env.capture_multi(
            scene, {spec.fixed_option_index[0], vis_option},
            ModalityWeights({0.5, 0.5}), rng.next_u64());
        // Alignment model sees the visual channel only.
        Observation vis_only;
        vis_only.channels.push_back(*full.find("visual"));
        out.emplace_back(std::move(vis_only), label);
      }
      break;
    }
  }
  return out;
}

}  // namespace asl
