#include "asl/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace asl {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::pair<std::string, std::string>> parse_kv(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> items;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    }
    items.emplace_back(key, value);
  }
  return items;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an unsigned integer: '" + value + "'");
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

EnvKind default_kind_for(const std::string& framework) {
  if (framework == "single-shot") return EnvKind::kSceneClassification;
  if (framework == "perception-only") return EnvKind::kDriftingPerception;
  if (framework == "conventional") return EnvKind::kBalance;
  if (framework == "sensorimotor") return EnvKind::kBalance;
  if (framework == "multimodal-sparse") return EnvKind::kGrip;
  throw ConfigError("framework: unknown value '" + framework + "'");
}

struct GridStaging {
  double exp_min = -4.0, exp_max = 4.0;
  int exp_steps = 5;
  double gain_min = 1.0, gain_max = 4.0;
  int gain_steps = 5;
  double range_min = 0.25, range_max = 2.0;
  int range_steps = 8;
};

void rebuild_grids(EnvSpec& env, const GridStaging& g) {
  switch (env.kind) {
    case EnvKind::kSceneClassification:
    case EnvKind::kDriftingPerception:
      env.option_spaces = {OptionSpace({{"exposure_stops", g.exp_min, g.exp_max, g.exp_steps},
                                        {"gain", g.gain_min, g.gain_max, g.gain_steps}})};
      env.fixed_option_index = {env.option_spaces[0].nearest_index({0.0, 1.0})};
      break;
    case EnvKind::kBalance:
      env.option_spaces = {
          OptionSpace({{"range", g.range_min, g.range_max, g.range_steps}})};
      env.fixed_option_index = {env.option_spaces[0].nearest_index({1.0})};
      break;
    case EnvKind::kGrip:
      // Grip grids stay at their defaults; only capture noise is tunable.
      break;
  }
}

ExperimentConfig build(std::vector<std::pair<std::string, std::string>> items) {
  // Later occurrences of a key (overrides) replace earlier ones; duplicates
  // within one file are rejected by load_config before reaching here.
  ExperimentConfig cfg;

  std::string framework = "single-shot";
  for (const auto& [k, v] : items) {
    if (k == "framework") framework = v;
  }
  cfg.framework = framework;

  EnvKind kind = default_kind_for(framework);
  for (const auto& [k, v] : items) {
    if (k == "env.kind") {
      try {
        kind = env_kind_from_string(v);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("env.kind: ") + e.what());
      }
    }
  }
  cfg.env = default_env_spec(kind);

  GridStaging grid;
  if (kind == EnvKind::kSceneClassification || kind == EnvKind::kDriftingPerception) {
    const auto& axes = cfg.env.option_spaces[0].axes();
    grid.exp_min = axes[0].lower;
    grid.exp_max = axes[0].upper;
    grid.exp_steps = axes[0].steps;
    grid.gain_min = axes[1].lower;
    grid.gain_max = axes[1].upper;
    grid.gain_steps = axes[1].steps;
  } else if (kind == EnvKind::kBalance) {
    const auto& axes = cfg.env.option_spaces[0].axes();
    grid.range_min = axes[0].lower;
    grid.range_max = axes[0].upper;
    grid.range_steps = axes[0].steps;
  }

  bool saw_episodes = false;
  for (const auto& [key, value] : items) {
    if (key == "framework" || key == "env.kind") {
      continue;  // consumed above
    } else if (key == "episodes") {
      cfg.episodes = parse_int(key, value);
      saw_episodes = true;
    } else if (key == "seed") {
      cfg.master_seed = parse_u64(key, value);
    } else if (key == "seeds") {
      cfg.seeds.clear();
      std::istringstream ss(value);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) cfg.seeds.push_back(parse_u64(key, tok));
      }
      if (cfg.seeds.empty()) throw ConfigError("seeds: empty list");
    } else if (key == "out") {
      cfg.out_dir = value;
    } else if (key == "format") {
      cfg.format = value;
    } else if (key == "env.horizon") {
      cfg.env.horizon = parse_int(key, value);
    } else if (key == "env.family_seed") {
      cfg.env.family_seed = parse_u64(key, value);
    } else if (key == "env.feature_dim") {
      cfg.env.feature_dim = parse_int(key, value);
    } else if (key == "env.classes") {
      cfg.env.classes = parse_int(key, value);
    } else if (key == "env.lighting_min") {
      cfg.env.lighting_min = parse_double(key, value);
    } else if (key == "env.lighting_max") {
      cfg.env.lighting_max = parse_double(key, value);
    } else if (key == "env.lighting_sigma") {
      cfg.env.lighting_sigma = parse_double(key, value);
    } else if (key == "env.lighting_clamp") {
      cfg.env.lighting_clamp = parse_double(key, value);
    } else if (key == "env.feature_noise") {
      cfg.env.feature_noise = parse_double(key, value);
    } else if (key == "env.dynamics_noise") {
      cfg.env.dynamics_noise = parse_double(key, value);
    } else if (key == "env.force_mag") {
      cfg.env.force_mag = parse_double(key, value);
    } else if (key == "env.theta_limit") {
      cfg.env.theta_limit = parse_double(key, value);
    } else if (key == "env.grip_dphi") {
      cfg.env.grip_dphi = parse_double(key, value);
    } else if (key == "env.grip_phi_threshold") {
      cfg.env.grip_phi_threshold = parse_double(key, value);
    } else if (key == "env.exposure_min") {
      grid.exp_min = parse_double(key, value);
    } else if (key == "env.exposure_max") {
      grid.exp_max = parse_double(key, value);
    } else if (key == "env.exposure_steps") {
      grid.exp_steps = parse_int(key, value);
    } else if (key == "env.gain_min") {
      grid.gain_min = parse_double(key, value);
    } else if (key == "env.gain_max") {
      grid.gain_max = parse_double(key, value);
    } else if (key == "env.gain_steps") {
      grid.gain_steps = parse_int(key, value);
    } else if (key == "env.range_min") {
      grid.range_min = parse_double(key, value);
    } else if (key == "env.range_max") {
      grid.range_max = parse_double(key, value);
    } else if (key == "env.range_steps") {
      grid.range_steps = parse_int(key, value);
    } else if (key == "env.sensor_noise") {
      const double s = parse_double(key, value);
      for (auto& cm : cfg.env.capture_models) cm.sigma0 = s;
    } else if (key == "env.gain_noise") {
      const double s = parse_double(key, value);
      for (auto& cm : cfg.env.capture_models) cm.gain_noise = s;
    } else if (key == "env.blur_width") {
      const int w = parse_int(key, value);
      for (auto& cm : cfg.env.capture_models) cm.blur_width = w;
    } else if (key == "learner.gamma") {
      cfg.learner.gamma = parse_double(key, value);
    } else if (key == "learner.alpha") {
      cfg.learner.alpha = parse_double(key, value);
    } else if (key == "learner.epsilon") {
      cfg.learner.epsilon = parse_double(key, value);
    } else if (key == "learner.k") {
      cfg.learner.candidates = parse_int(key, value);
    } else if (key == "learner.buckets") {
      cfg.learner.quality_buckets = parse_int(key, value);
    } else if (key == "learner.tau") {
      cfg.learner.weight_temperature = parse_double(key, value);
    } else if (key == "lambda") {
      cfg.lambda = parse_double(key, value);
    } else if (key == "lambda_tact") {
      cfg.lambda_tact = parse_double(key, value);
    } else if (key == "lambda_vis") {
      cfg.lambda_vis = parse_double(key, value);
    } else if (key == "train.samples") {
      cfg.train_samples = parse_int(key, value);
    } else if (key == "train.epochs") {
      cfg.train_epochs = parse_int(key, value);
    } else if (key == "train.lr") {
      cfg.train_lr = parse_double(key, value);
    } else if (key == "train.seed") {
      cfg.train_seed = parse_u64(key, value);
    } else if (key == "model.path") {
      cfg.model_path = value;
    } else {
      throw ConfigError("unknown key: " + key);
    }
  }

  rebuild_grids(cfg.env, grid);

  if (!cfg.seeds.empty()) {
    if (!saw_episodes) {
      cfg.episodes = static_cast<int>(cfg.seeds.size());
    } else if (cfg.episodes != static_cast<int>(cfg.seeds.size())) {
      throw ConfigError("episodes: must match the seeds list length");
    }
  }

  cfg.validate();
  return cfg;
}

}  // namespace

void ExperimentConfig::validate() const {
  default_kind_for(framework);  // rejects unknown framework names
  if (episodes < 1) throw ConfigError("episodes: must be >= 1");
  if (format != "csv" && format != "jsonl") {
    throw ConfigError("format: must be csv or jsonl");
  }
  try {
    env.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  try {
    learner.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (train_samples < 1) throw ConfigError("train.samples: must be >= 1");
  if (train_epochs < 1) throw ConfigError("train.epochs: must be >= 1");
  if (!(train_lr > 0.0)) throw ConfigError("train.lr: must be > 0");
  if (!(lambda >= 0.0)) throw ConfigError("lambda: must be >= 0");

  const EnvKind kind = env.kind;
  const bool ok =
      (framework == "single-shot" && kind == EnvKind::kSceneClassification) ||
      (framework == "perception-only" && env.action_free()) ||
      (framework == "conventional" && !env.action_free()) ||
      (framework == "sensorimotor" && kind == EnvKind::kBalance) ||
      (framework == "multimodal-sparse" && kind == EnvKind::kGrip);
  if (!ok) {
    throw ConfigError("framework: '" + framework + "' is not compatible with env.kind '" +
                      to_string(kind) + "'");
  }
  if (framework == "single-shot" &&
      learner.candidates > env.option_spaces[0].total_size()) {
    throw ConfigError("learner.k: exceeds the option grid size (" +
                      std::to_string(env.option_spaces[0].total_size()) + ")");
  }
}

std::uint64_t ExperimentConfig::episode_seed(int episode) const {
  if (!seeds.empty()) return seeds[static_cast<std::size_t>(episode)];
  return mix_seed(master_seed, static_cast<std::uint64_t>(episode));
}

ExperimentConfig parse_config_text(
    const std::string& text,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  auto items = parse_kv(text);
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      if (items[i].first == items[j].first) {
        throw ConfigError("duplicate key: " + items[i].first);
      }
    }
  }
  // Overrides replace in place (or append) so build sees one value per key.
  for (const auto& [k, v] : overrides) {
    bool replaced = false;
    for (auto& item : items) {
      if (item.first == k) {
        item.second = v;
        replaced = true;
        break;
      }
    }
    if (!replaced) items.emplace_back(k, v);
  }
  return build(std::move(items));
}

ExperimentConfig load_config(const std::string& path) {
  return load_config(path, {});
}

ExperimentConfig load_config(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), overrides);
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "framework = " << cfg.framework << "\n";
  out << "episodes = " << cfg.episodes << "\n";
  if (cfg.seeds.empty()) {
    out << "seed = " << cfg.master_seed << "\n";
  } else {
    out << "seeds = ";
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
      out << (i ? "," : "") << cfg.seeds[i];
    }
    out << "\n";
  }
  if (!cfg.out_dir.empty()) out << "out = " << cfg.out_dir << "\n";
  out << "format = " << cfg.format << "\n";

  const EnvSpec& env = cfg.env;
  out << "env.kind = " << to_string(env.kind) << "\n";
  out << "env.horizon = " << env.horizon << "\n";
  out << "env.family_seed = " << env.family_seed << "\n";
  switch (env.kind) {
    case EnvKind::kSceneClassification:
    case EnvKind::kDriftingPerception: {
      const auto& axes = env.option_spaces[0].axes();
      out << "env.feature_dim = " << env.feature_dim << "\n";
      out << "env.classes = " << env.classes << "\n";
      out << "env.lighting_min = " << fmt(env.lighting_min) << "\n";
      out << "env.lighting_max = " << fmt(env.lighting_max) << "\n";
      out << "env.lighting_sigma = " << fmt(env.lighting_sigma) << "\n";
      out << "env.lighting_clamp = " << fmt(env.lighting_clamp) << "\n";
      out << "env.feature_noise = " << fmt(env.feature_noise) << "\n";
      out << "env.exposure_min = " << fmt(axes[0].lower) << "\n";
      out << "env.exposure_max = " << fmt(axes[0].upper) << "\n";
      out << "env.exposure_steps = " << axes[0].steps << "\n";
      out << "env.gain_min = " << fmt(axes[1].lower) << "\n";
      out << "env.gain_max = " << fmt(axes[1].upper) << "\n";
      out << "env.gain_steps = " << axes[1].steps << "\n";
      out << "env.gain_noise = " << fmt(env.capture_models[0].gain_noise) << "\n";
      break;
    }
    case EnvKind::kBalance: {
      const auto& axes = env.option_spaces[0].axes();
      out << "env.dynamics_noise = " << fmt(env.dynamics_noise) << "\n";
      out << "env.force_mag = " << fmt(env.force_mag) << "\n";
      out << "env.theta_limit = " << fmt(env.theta_limit) << "\n";
      out << "env.range_min = " << fmt(axes[0].lower) << "\n";
      out << "env.range_max = " << fmt(axes[0].upper) << "\n";
      out << "env.range_steps = " << axes[0].steps << "\n";
      break;
    }
    case EnvKind::kGrip:
      out << "env.grip_dphi = " << fmt(env.grip_dphi) << "\n";
      out << "env.grip_phi_threshold = " << fmt(env.grip_phi_threshold) << "\n";
      break;
  }
  out << "env.sensor_noise = " << fmt(env.capture_models[0].sigma0) << "\n";
  out << "env.blur_width = " << env.capture_models[0].blur_width << "\n";

  out << "learner.gamma = " << fmt(cfg.learner.gamma) << "\n";
  out << "learner.alpha = " << fmt(cfg.learner.alpha) << "\n";
  out << "learner.epsilon = " << fmt(cfg.learner.epsilon) << "\n";
  out << "learner.k = " << cfg.learner.candidates << "\n";
  out << "learner.buckets = " << cfg.learner.quality_buckets << "\n";
  out << "learner.tau = " << fmt(cfg.learner.weight_temperature) << "\n";
  out << "lambda = " << fmt(cfg.lambda) << "\n";
  out << "lambda_tact = " << fmt(cfg.lambda_tact) << "\n";
  out << "lambda_vis = " << fmt(cfg.lambda_vis) << "\n";
  out << "train.samples = " << cfg.train_samples << "\n";
  out << "train.epochs = " << cfg.train_epochs << "\n";
  out << "train.lr = " << fmt(cfg.train_lr) << "\n";
  out << "train.seed = " << cfg.train_seed << "\n";
  if (!cfg.model_path.empty()) out << "model.path = " << cfg.model_path << "\n";
  return out.str();
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  // Every semantically meaningful field appears in the canonical form.
  return serialize_config(a) == serialize_config(b);
}

}  // namespace asl
