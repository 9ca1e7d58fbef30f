#include "asl/experiment.hpp"

#include <cstdlib>
#include <filesystem>
#include <numeric>

#include "asl/envs.hpp"
#include "asl/loops.hpp"

namespace asl {

namespace {

EpisodeRow row_from_trajectory(int episode, const Trajectory& traj,
                               bool task_is_success, bool correctness_rate) {
  EpisodeRow row;
  row.episode = episode;
  row.seed = traj.seed;
  row.steps = static_cast<int>(traj.steps.size());
  double task_sum = 0.0;
  double q_sum = 0.0;
  int q_count = 0;
  for (const StepRecord& rec : traj.steps) {
    row.ret += rec.reward.total;
    task_sum += rec.reward.task;
    if (!rec.qualities.empty()) {
      double q = 0.0;
      for (const QualityScore& s : rec.qualities) q += s.value();
      q_sum += q / static_cast<double>(rec.qualities.size());
      ++q_count;
    }
    if (rec.option_index >= 0) row.option_histogram[rec.option_index] += 1;
  }
  if (q_count > 0) row.mean_q = q_sum / static_cast<double>(q_count);
  if (task_is_success) {
    row.correct = task_sum > 0.0 ? 1.0 : 0.0;
  } else if (correctness_rate && row.steps > 0) {
    row.correct = task_sum / static_cast<double>(row.steps);
  }
  return row;
}

}  // namespace

PerceptionModel prepare_model(const ExperimentConfig& config) {
  if (!config.model_path.empty()) return load_model(config.model_path);
  const auto dataset =
      make_training_dataset(config.env, config.train_samples, config.train_seed);
  return train_perception(dataset, training_class_count(config.env),
                          config.train_epochs, config.train_lr,
                          config.train_seed);
}

namespace {

MetricsReport run_impl(const ExperimentConfig& config, MetricsWriter* writer) {
  config.validate();
  const EnvSpec& spec = config.env;
  const LearnerConfig& learner = config.learner;
  MetricsReport report;
  report.rows.reserve(static_cast<std::size_t>(config.episodes));

  const auto emit = [&](EpisodeRow row) {
    if (writer != nullptr) writer->write_row(row);
    report.rows.push_back(std::move(row));
  };

  if (config.framework == "single-shot") {
    const PerceptionModel model = prepare_model(config);
    for (int e = 0; e < config.episodes; ++e) {
      const SelectionRecord rec = run_single_shot(
          spec, learner.candidates, model, config.episode_seed(e));
      EpisodeRow row;
      row.episode = e;
      row.seed = rec.seed;
      row.ret = rec.correct ? 1.0 : 0.0;
      row.steps = 1;
      row.correct = rec.correct ? 1.0 : 0.0;
      row.mean_q = rec.chosen_quality;
      row.option_histogram[rec.chosen_option_index] = 1;
      emit(std::move(row));
    }
  } else if (config.framework == "conventional") {
    Env probe(spec);
    ActionPolicyState action(probe.observation_bucket_count(),
                             learner.quality_buckets, spec.action_count,
                             learner.epsilon, learner.alpha);
    const bool success_metric = spec.kind == EnvKind::kGrip;
    for (int e = 0; e < config.episodes; ++e) {
      const Trajectory traj =
          run_conventional(spec, action, learner, config.episode_seed(e));
      emit(row_from_trajectory(e, traj, success_metric, false));
    }
  } else if (config.framework == "perception-only") {
    const PerceptionModel model = prepare_model(config);
    SensePolicyState sense(learner.quality_buckets,
                           spec.option_spaces[0].total_size(), learner.epsilon,
                           learner.alpha);
    for (int e = 0; e < config.episodes; ++e) {
      const Trajectory traj = run_perception_only(spec, sense, model, learner,
                                                  config.episode_seed(e));
      emit(row_from_trajectory(e, traj, false, true));
    }
  } else if (config.framework == "sensorimotor") {
    const PerceptionModel model = prepare_model(config);
    Env probe(spec);
    ActionPolicyState action(probe.observation_bucket_count(),
                             learner.quality_buckets, spec.action_count,
                             learner.epsilon, learner.alpha);
    SensePolicyState sense(learner.quality_buckets,
                           spec.option_spaces[0].total_size(), learner.epsilon,
                           learner.alpha);
    for (int e = 0; e < config.episodes; ++e) {
      const Trajectory traj =
          run_sensorimotor(spec, action, sense, config.lambda, model, learner,
                           config.episode_seed(e));
      emit(row_from_trajectory(e, traj, false, false));
    }
  } else if (config.framework == "multimodal-sparse") {
    const PerceptionModel model = prepare_model(config);
    Env probe(spec);
    ActionPolicyState action(probe.observation_bucket_count(),
                             learner.quality_buckets, spec.action_count,
                             learner.epsilon, learner.alpha);
    std::vector<SensePolicyState> senses;
    for (int m = 0; m < spec.num_modalities(); ++m) {
      senses.emplace_back(learner.quality_buckets,
                          spec.option_spaces[static_cast<std::size_t>(m)].total_size(),
                          learner.epsilon, learner.alpha);
    }
    for (int e = 0; e < config.episodes; ++e) {
      const Trajectory traj = run_multimodal_sparse(
          spec, action, senses, config.lambda_tact, config.lambda_vis, model,
          learner, config.episode_seed(e));
      emit(row_from_trajectory(e, traj, true, false));
    }
  } else {
    throw ConfigError("framework: unknown value '" + config.framework + "'");
  }

  report.aggregate = MetricsReport::compute(report.rows);
  if (writer != nullptr) writer->finish(report.aggregate);
  return report;
}

}  // namespace

MetricsReport run_experiment(const ExperimentConfig& config) {
  return run_impl(config, nullptr);
}

ExperimentOutput run_experiment_to_dir(const ExperimentConfig& config,
                                       const std::string& name) {
  std::string dir = config.out_dir;
  if (dir.empty()) {
    const char* env_dir = std::getenv("ASL_OUT_DIR");
    dir = env_dir != nullptr && *env_dir != '\0' ? env_dir : "out";
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory: " + dir + " (" +
                             ec.message() + ")");
  }
  const std::string ext = config.format == "jsonl" ? ".jsonl" : ".csv";
  const std::string path = (std::filesystem::path(dir) / (name + ext)).string();

  MetricsWriter writer(path, config.format, config.episodes);
  ExperimentOutput out;
  out.report = run_impl(config, &writer);
  out.metrics_path = path;
  return out;
}

}  // namespace asl
