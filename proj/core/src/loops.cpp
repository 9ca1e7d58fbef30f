#include "asl/loops.hpp"

#include <cmath>
#include <stdexcept>

#include "asl/learn.hpp"

namespace asl {

RewardBreakdown compose_reward(
    double task, const std::vector<std::pair<double, QualityScore>>& terms) {
  RewardBreakdown out;
  out.task = task;
  out.total = task;
  out.quality_terms.reserve(terms.size());
  for (const auto& [lambda, score] : terms) {
    if (!std::isfinite(lambda)) {
      throw std::invalid_argument("compose_reward: non-finite lambda");
    }
    out.quality_terms.push_back({score.metric(), lambda, score.value()});
    out.total += lambda * score.value();
  }
  return out;
}

double recompute_total(const RewardBreakdown& breakdown) {
  double total = breakdown.task;
  for (const QualityTerm& term : breakdown.quality_terms) {
    total += term.lambda * term.q;
  }
  return total;
}

namespace {

Observation capture_fixed(const Env& env, const AnalogScene& scene,
                          std::uint64_t seed) {
  const EnvSpec& spec = env.spec();
  if (spec.kind == EnvKind::kGrip) {
    return env.capture_multi(scene, spec.fixed_option_index,
                             weights_project({1.0, 1.0}), seed);
  }
  return env.capture(scene, spec.fixed_option_index[0], seed);
}

}  // namespace

Trajectory run_conventional(const EnvSpec& spec, ActionPolicyState& policy,
                            const LearnerConfig& config,
                            std::uint64_t episode_seed) {
  spec.validate();
  config.validate();
  if (spec.action_free()) {
    throw std::invalid_argument("run_conventional: perception-only spec");
  }
  Env env(spec);
  Trajectory traj;
  traj.seed = episode_seed;

  AnalogScene scene = env.reset(stream_seed(episode_seed, stream::kReset));
  Observation obs =
      capture_fixed(env, scene, stream_seed(episode_seed, stream::kMeasure, 0));
  int bucket = env.observation_bucket(obs);
  int prev_action = 0;

  const SensorOption fixed_option =
      spec.option_spaces[0].option_at(spec.fixed_option_index[0]);

  for (int t = 0; t < spec.horizon; ++t) {
    const int action = action_policy_step(
        policy, bucket, prev_action, 0.0,
        stream_seed(episode_seed, stream::kActionPolicy, static_cast<std::uint64_t>(t)));
    Env::StepResult step =
        env.step(action, stream_seed(episode_seed, stream::kEnv,
                                     static_cast<std::uint64_t>(t)));
    Observation next_obs = capture_fixed(
        env, step.scene,
        stream_seed(episode_seed, stream::kMeasure, static_cast<std::uint64_t>(t) + 1));
    const int next_bucket = env.observation_bucket(next_obs);

    const RewardBreakdown reward = compose_reward(step.task_reward, {});
    q_update(policy.table(), policy.state_index(bucket, 0, prev_action), action,
             reward.total, policy.state_index(next_bucket, 0, action),
             step.done, policy.alpha(), config.gamma);

    StepRecord rec;
    rec.step = t;
    rec.observation = next_obs;
    rec.action = action;
    rec.option = fixed_option;
    rec.option_index = spec.fixed_option_index[0];
    rec.reward = reward;
    rec.done = step.done;
    traj.steps.push_back(std::move(rec));

    prev_action = action;
    bucket = next_bucket;
    obs = std::move(next_obs);
    if (step.done) break;
  }
  return traj;
}

SelectionRecord run_single_shot(const EnvSpec& spec, int k,
                                const PerceptionModel& model,
                                std::uint64_t episode_seed) {
  spec.validate();
  if (spec.kind != EnvKind::kSceneClassification) {
    throw std::invalid_argument("run_single_shot: needs a scene-classification spec");
  }
  const OptionSpace& space = spec.option_spaces[0];
  if (k < 1 || k > space.total_size()) {
    throw std::invalid_argument("run_single_shot: k out of range");
  }

  Env env(spec);
  const AnalogScene scene = env.reset(stream_seed(episode_seed, stream::kReset));

  SelectionRecord rec;
  rec.seed = episode_seed;
  rec.candidate_option_indices = sample_candidate_indices(
      space, k, stream_seed(episode_seed, stream::kCandidates));

  std::vector<std::pair<SensorOption, Observation>> candidates;
  candidates.reserve(rec.candidate_option_indices.size());
  const std::uint64_t capture_base =
      stream_seed(episode_seed, stream::kCandidateCapture);
  for (int idx : rec.candidate_option_indices) {
    Observation obs = env.capture(scene, idx,
                                  mix_seed(capture_base, static_cast<std::uint64_t>(idx)));
    candidates.emplace_back(space.option_at(idx), std::move(obs));
  }

  const auto [chosen, quality] = select_single_shot(candidates, model);
  rec.chosen_candidate = chosen;
  rec.chosen_option_index =
      rec.candidate_option_indices[static_cast<std::size_t>(chosen)];
  rec.option = space.option_at(rec.chosen_option_index);
  rec.chosen_quality = quality.value();
  rec.candidate_qualities.reserve(candidates.size());
  for (const auto& [opt, obs] : candidates) {
    rec.candidate_qualities.push_back(
        quality_max_confidence(model, obs).value());
  }

  // Observe the perceptually optimal state: a fresh capture at the winner.
  rec.observation = env.capture(scene, rec.chosen_option_index,
                                stream_seed(episode_seed, stream::kFinalCapture));
  rec.prediction = predict(model, rec.observation);
  rec.predicted_label = argmax(rec.prediction);
  rec.true_label = env.current_label();
  rec.correct = rec.predicted_label == rec.true_label;
  return rec;
}

namespace {

// Shared body of the fixed and adaptive perception-only loops.
Trajectory perception_loop(const EnvSpec& spec, SensePolicyState* policy,
                           const PerceptionModel& model,
                           const LearnerConfig* config,
                           std::uint64_t episode_seed,
                           std::optional<int> pinned_option) {
  spec.validate();
  if (!spec.action_free()) {
    throw std::invalid_argument("run_perception_only: spec has actions");
  }
  const OptionSpace& space = spec.option_spaces[0];
  if (pinned_option && (*pinned_option < 0 || *pinned_option >= space.total_size())) {
    throw std::invalid_argument("run_perception_only: pinned option out of range");
  }

  Env env(spec);
  Trajectory traj;
  traj.seed = episode_seed;

  AnalogScene scene = env.reset(stream_seed(episode_seed, stream::kReset));
  int option = pinned_option.value_or(spec.fixed_option_index[0]);
  Observation obs = env.capture(
      scene, option, stream_seed(episode_seed, stream::kMeasure, 0));
  QualityScore q = quality_max_confidence(model, obs);

  for (int t = 0; t < spec.horizon; ++t) {
    int next_option = option;
    if (!pinned_option) {
      next_option = sense_policy_step(
          *policy, q.value(), option,
          stream_seed(episode_seed, stream::kSensePolicy, static_cast<std::uint64_t>(t)));
    }
    Env::StepResult step = env.step(
        std::nullopt,
        stream_seed(episode_seed, stream::kEnv, static_cast<std::uint64_t>(t)));
    Observation next_obs = env.capture(
        step.scene, next_option,
        stream_seed(episode_seed, stream::kMeasure, static_cast<std::uint64_t>(t) + 1));
    const QualityScore next_q = quality_max_confidence(model, next_obs);

    const bool correct =
        argmax(predict(model, next_obs)) == env.current_label();
    const RewardBreakdown reward = compose_reward(correct ? 1.0 : 0.0, {});

    if (!pinned_option) {
      // The sensing MDP maximizes the quality of the observation it causes.
      q_update(policy->table(),
               policy->state_index(quality_bucket(q.value(), policy->quality_buckets()),
                                   option),
               next_option, next_q.value(),
               policy->state_index(
                   quality_bucket(next_q.value(), policy->quality_buckets()),
                   next_option),
               step.done, policy->alpha(), config->gamma);
    }

    StepRecord rec;
    rec.step = t;
    rec.observation = next_obs;
    rec.option = space.option_at(next_option);
    rec.option_index = next_option;
    rec.qualities = {next_q};
    rec.reward = reward;
    rec.done = step.done;
    traj.steps.push_back(std::move(rec));

    option = next_option;
    obs = std::move(next_obs);
    q = next_q;
    if (step.done) break;
  }
  return traj;
}

}  // namespace

Trajectory run_fixed_sensing(const EnvSpec& spec, const PerceptionModel& model,
                             std::uint64_t episode_seed) {
  spec.validate();
  return perception_loop(spec, nullptr, model, nullptr, episode_seed,
                         spec.fixed_option_index[0]);
}

Trajectory run_perception_only(const EnvSpec& spec, SensePolicyState& policy,
                               const PerceptionModel& model,
                               const LearnerConfig& config,
                               std::uint64_t episode_seed,
                               std::optional<int> pinned_option) {
  config.validate();
  if (policy.option_count() != spec.option_spaces[0].total_size()) {
    throw std::invalid_argument("run_perception_only: policy/grid size mismatch");
  }
  return perception_loop(spec, &policy, model, &config, episode_seed,
                         pinned_option);
}

Trajectory run_sensorimotor(const EnvSpec& spec, ActionPolicyState& action_policy,
                            SensePolicyState& sense_policy, double lambda,
                            const PerceptionModel& model,
                            const LearnerConfig& config,
                            std::uint64_t episode_seed, SensingMode mode,
                            bool use_quality) {
  spec.validate();
  config.validate();
  if (spec.action_free()) {
    throw std::invalid_argument("run_sensorimotor: spec has no actions");
  }
  if (spec.kind == EnvKind::kGrip) {
    throw std::invalid_argument("run_sensorimotor: grip runs the multimodal loop");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("run_sensorimotor: lambda must be >= 0");
  }
  const OptionSpace& space = spec.option_spaces[0];
  if (mode.kind == SensingMode::kPinned &&
      (mode.pinned_index < 0 || mode.pinned_index >= space.total_size())) {
    throw std::invalid_argument("run_sensorimotor: pinned option out of range");
  }

  Env env(spec);
  Trajectory traj;
  traj.seed = episode_seed;

  AnalogScene scene = env.reset(stream_seed(episode_seed, stream::kReset));
  int option = mode.kind == SensingMode::kPinned ? mode.pinned_index
                                                 : spec.fixed_option_index[0];
  Observation obs = env.capture(
      scene, option, stream_seed(episode_seed, stream::kMeasure, 0));
  double q = use_quality ? quality_max_confidence(model, obs).value() : 0.0;
  int bucket = env.observation_bucket(obs);
  int prev_action = 0;

  for (int t = 0; t < spec.horizon; ++t) {
    const std::uint64_t tu = static_cast<std::uint64_t>(t);
    const int q_bucket =
        use_quality ? quality_bucket(q, action_policy.quality_buckets()) : 0;
    const int action = action_policy_step(
        action_policy, bucket, prev_action, use_quality ? q : 0.0,
        stream_seed(episode_seed, stream::kActionPolicy, tu));

    int next_option = option;
    switch (mode.kind) {
      case SensingMode::kLearned:
        next_option = sense_policy_step(
            sense_policy, q, option,
            stream_seed(episode_seed, stream::kSensePolicy, tu));
        break;
      case SensingMode::kPinned:
        next_option = mode.pinned_index;
        break;
      case SensingMode::kUniformRandom: {
        Rng rng(stream_seed(episode_seed, stream::kSensePolicy, tu));
        next_option = rng.uniform_int(space.total_size());
        break;
      }
    }

    Env::StepResult step =
        env.step(action, stream_seed(episode_seed, stream::kEnv, tu));
    Observation next_obs = env.capture(
        step.scene, next_option,
        stream_seed(episode_seed, stream::kMeasure, tu + 1));
    const int next_bucket = env.observation_bucket(next_obs);

    RewardBreakdown reward;
    double next_q = 0.0;
    std::vector<QualityScore> qualities;
    if (use_quality) {
      const QualityScore score = quality_max_confidence(model, next_obs);
      next_q = score.value();
      reward = compose_reward(step.task_reward, {{lambda, score}});
      qualities = {score};
    } else {
      reward = compose_reward(step.task_reward, {});
    }
    const int next_q_bucket =
        use_quality ? quality_bucket(next_q, action_policy.quality_buckets()) : 0;

    q_update(action_policy.table(),
             action_policy.state_index(bucket, q_bucket, prev_action), action,
             reward.total,
             action_policy.state_index(next_bucket, next_q_bucket, action),
             step.done, action_policy.alpha(), config.gamma);
    if (mode.kind == SensingMode::kLearned) {
      q_update(sense_policy.table(),
               sense_policy.state_index(
                   quality_bucket(use_quality ? q : 0.0, sense_policy.quality_buckets()),
                   option),
               next_option, reward.total,
               sense_policy.state_index(
                   quality_bucket(use_quality ? next_q : 0.0,
                                  sense_policy.quality_buckets()),
                   next_option),
               step.done, sense_policy.alpha(), config.gamma);
    }

    StepRecord rec;
    rec.step = t;
    rec.observation = next_obs;
    rec.action = action;
    rec.option = space.option_at(next_option);
    rec.option_index = next_option;
    rec.qualities = std::move(qualities);
    rec.reward = reward;
    rec.done = step.done;
    traj.steps.push_back(std::move(rec));

    option = next_option;
    obs = std::move(next_obs);
    q = next_q;
    bucket = next_bucket;
    prev_action = action;
    if (step.done) break;
  }
  return traj;
}

Trajectory run_multimodal_sparse(const EnvSpec& spec,
                                 ActionPolicyState& action_policy,
                                 std::vector<SensePolicyState>& sense_policies,
                                 double lambda_tact, double lambda_vis,
                                 const PerceptionModel& alignment_model,
                                 const LearnerConfig& config,
                                 std::uint64_t episode_seed) {
  spec.validate();
  config.validate();
  if (spec.kind != EnvKind::kGrip || spec.num_modalities() != 2) {
    throw std::invalid_argument("run_multimodal_sparse: needs the two-modality grip spec");
  }
  if (sense_policies.size() != 2) {
    throw std::invalid_argument("run_multimodal_sparse: needs one sensing policy per modality");
  }
  if (!std::isfinite(lambda_tact) || !std::isfinite(lambda_vis)) {
    throw std::invalid_argument("run_multimodal_sparse: non-finite lambda");
  }

  Env env(spec);
  Trajectory traj;
  traj.seed = episode_seed;

  AnalogScene scene = env.reset(stream_seed(episode_seed, stream::kReset));
  std::vector<int> options = spec.fixed_option_index;
  ModalityWeights weights = weights_project({1.0, 1.0});
  Observation obs = env.capture_multi(
      scene, options, weights, stream_seed(episode_seed, stream::kMeasure, 0));

  const auto evaluate = [&](const Observation& o, int prev_action,
                            const std::vector<int>& opt) {
    const SensorOption tact_opt = spec.option_spaces[0].option_at(opt[0]);
    const SensorOption vis_opt = spec.option_spaces[1].option_at(opt[1]);
    const QualityScore grip = quality_grip(o, prev_action, tact_opt);
    const QualityScore vis =
        quality_visual_alignment(o, prev_action, vis_opt, tact_opt, alignment_model);
    return std::pair<QualityScore, QualityScore>(grip, vis);
  };

  int prev_action = 0;
  auto [q_grip, q_vis] = evaluate(obs, prev_action, options);
  int bucket = env.observation_bucket(obs);

  for (int t = 0; t < spec.horizon; ++t) {
    const std::uint64_t tu = static_cast<std::uint64_t>(t);
    const double q_mean = 0.5 * (q_grip.value() + q_vis.value());
    const int action = action_policy_step(
        action_policy, bucket, prev_action, q_mean,
        stream_seed(episode_seed, stream::kActionPolicy, tu));

    MultiSenseDecision decision = multi_sense_policy_step(
        sense_policies, config.weight_temperature,
        {q_grip.value(), q_vis.value()}, options,
        stream_seed(episode_seed, stream::kSensePolicy, tu));

    Env::StepResult step =
        env.step(action, stream_seed(episode_seed, stream::kEnv, tu));
    Observation next_obs = env.capture_multi(
        step.scene, decision.option_indices, decision.weights,
        stream_seed(episode_seed, stream::kMeasure, tu + 1));
    auto [next_q_grip, next_q_vis] =
        evaluate(next_obs, action, decision.option_indices);
    const int next_bucket = env.observation_bucket(next_obs);

    const RewardBreakdown reward = compose_reward(
        step.task_reward, {{lambda_tact, next_q_grip}, {lambda_vis, next_q_vis}});

    const double q_mean_next = 0.5 * (next_q_grip.value() + next_q_vis.value());
    q_update(action_policy.table(),
             action_policy.state_index(
                 bucket, quality_bucket(q_mean, action_policy.quality_buckets()),
                 prev_action),
             action, reward.total,
             action_policy.state_index(
                 next_bucket,
                 quality_bucket(q_mean_next, action_policy.quality_buckets()),
                 action),
             step.done, action_policy.alpha(), config.gamma);

    const double qs[2] = {q_grip.value(), q_vis.value()};
    const double next_qs[2] = {next_q_grip.value(), next_q_vis.value()};
    for (std::size_t m = 0; m < 2; ++m) {
      SensePolicyState& sp = sense_policies[m];
      q_update(sp.table(),
               sp.state_index(quality_bucket(qs[m], sp.quality_buckets()),
                              options[m]),
               decision.option_indices[m], reward.total,
               sp.state_index(quality_bucket(next_qs[m], sp.quality_buckets()),
                              decision.option_indices[m]),
               step.done, sp.alpha(), config.gamma);
    }

    StepRecord rec;
    rec.step = t;
    rec.observation = next_obs;
    rec.action = action;
    rec.option = spec.option_spaces[0].option_at(decision.option_indices[0]);
    rec.option_index = decision.option_indices[0];
    rec.weights = decision.weights;
    rec.qualities = {next_q_grip, next_q_vis};
    rec.reward = reward;
    rec.done = step.done;
    traj.steps.push_back(std::move(rec));

    options = decision.option_indices;
    weights = decision.weights;
    obs = std::move(next_obs);
    q_grip = next_q_grip;
    q_vis = next_q_vis;
    bucket = next_bucket;
    prev_action = action;
    if (step.done) break;
  }
  return traj;
}

}  // namespace asl
