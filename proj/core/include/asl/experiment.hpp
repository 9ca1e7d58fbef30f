#pragma once

#include <string>

#include "asl/config.hpp"
#include "asl/metrics.hpp"
#include "asl/perception.hpp"

namespace asl {

// The designated perception model for the configured environment: loaded
// from config.model_path when set, otherwise trained on the environment's
// labeled capture dataset.
PerceptionModel prepare_model(const ExperimentConfig& config);

// Runs the configured framework for every episode (sequentially; learning
// state persists across episodes) and returns the collected metrics.
MetricsReport run_experiment(const ExperimentConfig& config);

// Same, streaming rows to <out_dir>/<name>.<format> as they complete.
struct ExperimentOutput {
  MetricsReport report;
  std::string metrics_path;
};
ExperimentOutput run_experiment_to_dir(const ExperimentConfig& config,
                                       const std::string& name);

}  // namespace asl
