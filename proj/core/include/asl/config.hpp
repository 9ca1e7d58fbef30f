#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "asl/core.hpp"
#include "asl/envs.hpp"

namespace asl {

// Raised for malformed or inconsistent configuration; the message names the
// offending key.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ExperimentConfig {
  std::string framework = "single-shot";  // conventional | single-shot |
                                          // perception-only | sensorimotor |
                                          // multimodal-sparse
  int episodes = 100;
  std::uint64_t master_seed = 42;
  std::vector<std::uint64_t> seeds;  // explicit per-episode seeds (optional)
  std::string out_dir;               // empty -> $ASL_OUT_DIR or "out"
  std::string format = "csv";        // csv | jsonl

  EnvSpec env;
  LearnerConfig learner;
  double lambda = 0.1;
  double lambda_tact = 0.1;
  double lambda_vis = 0.1;

  int train_samples = 800;
  int train_epochs = 300;
  double train_lr = 0.5;
  std::uint64_t train_seed = 123;
  std::string model_path;  // load instead of training when set

  void validate() const;  // throws ConfigError naming the key
  std::uint64_t episode_seed(int episode) const;
};

// Flat key=value text with dotted section prefixes, '#' comments, unknown
// keys rejected. Overrides are applied after the file's keys (last wins).
ExperimentConfig load_config(const std::string& path);
ExperimentConfig load_config(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides);
ExperimentConfig parse_config_text(
    const std::string& text,
    const std::vector<std::pair<std::string, std::string>>& overrides = {});

// Canonical form; parse(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace asl
