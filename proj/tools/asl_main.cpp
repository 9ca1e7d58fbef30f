// Command-line front end for the adaptive sensing lab: runs experiments from
// config files, sweeps a parameter, compares reports, and ships small demos.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asl/compare.hpp"
#include "asl/config.hpp"
#include "asl/experiment.hpp"
#include "asl/metrics.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct CommonFlags {
  std::string seed;
  std::string episodes;
  std::string out;
  std::string format;
  bool quiet = false;

  std::vector<std::pair<std::string, std::string>> overrides() const {
    std::vector<std::pair<std::string, std::string>> o;
    if (!seed.empty()) o.emplace_back("seed", seed);
    if (!episodes.empty()) o.emplace_back("episodes", episodes);
    if (!out.empty()) o.emplace_back("out", out);
    if (!format.empty()) o.emplace_back("format", format);
    return o;
  }
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Master seed override");
  cmd->add_option("--episodes", flags.episodes, "Episode count override");
  cmd->add_option("--out", flags.out, "Output directory override");
  cmd->add_option("--format", flags.format, "Metrics format (csv|jsonl)")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_flag("--quiet", flags.quiet, "Only print the aggregate line");
}

std::string config_stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

std::string sanitize(const std::string& value) {
  std::string out = value;
  for (char& c : out) {
    if (c == '/' || c == '\\' || c == ' ' || c == ',' || c == '.') c = '_';
  }
  return out;
}

int run_one(const asl::ExperimentConfig& config, const std::string& name,
            bool quiet) {
  const asl::ExperimentOutput out = asl::run_experiment_to_dir(config, name);
  if (!quiet) std::cout << "wrote " << out.metrics_path << "\n";
  std::cout << "aggregate " << asl::aggregate_summary(out.report.aggregate)
            << "\n";
  return kExitOk;
}

// Built-in demo configs, one per framework kind.
std::string demo_config_text(const std::string& framework) {
  if (framework == "single-shot") {
    return "framework = single-shot\nepisodes = 60\nlearner.k = 8\n"
           "train.samples = 400\ntrain.epochs = 150\n";
  }
  if (framework == "conventional") {
    return "framework = conventional\nepisodes = 40\nenv.horizon = 120\n";
  }
  if (framework == "perception-only") {
    return "framework = perception-only\nepisodes = 25\nenv.horizon = 40\n"
           "train.samples = 400\ntrain.epochs = 150\n";
  }
  if (framework == "sensorimotor") {
    return "framework = sensorimotor\nepisodes = 40\nenv.horizon = 120\n"
           "train.samples = 400\ntrain.epochs = 150\n";
  }
  if (framework == "multimodal-sparse") {
    return "framework = multimodal-sparse\nepisodes = 60\n"
           "train.samples = 400\ntrain.epochs = 150\n";
  }
  throw asl::ConfigError("demo: unknown framework '" + framework + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asl - closed-loop adaptive sensing experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string report_a, report_b;
  std::string metric_name = "ret";
  std::string sweep_param;
  std::string sweep_values;
  std::string demo_framework;

  CommonFlags run_flags, sweep_flags, demo_flags;

  CLI::App* cmd_run = app.add_subcommand("run", "Run an experiment config");
  cmd_run->add_option("config", config_path, "Path to key=value config")->required();
  add_common_flags(cmd_run, run_flags);

  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "Repeat a run over overridden values");
  cmd_sweep->add_option("config", config_path, "Path to key=value config")->required();
  cmd_sweep->add_option("--param", sweep_param, "Config key to sweep")->required();
  cmd_sweep->add_option("--values", sweep_values, "Comma-separated values")->required();
  add_common_flags(cmd_sweep, sweep_flags);

  CLI::App* cmd_compare =
      app.add_subcommand("compare", "Paired comparison of two metrics files");
  cmd_compare->add_option("report_a", report_a, "First metrics file")->required();
  cmd_compare->add_option("report_b", report_b, "Second metrics file")->required();
  cmd_compare->add_option("--metric", metric_name, "ret|steps|correct|mean_q");

  CLI::App* cmd_enum = app.add_subcommand(
      "enumerate-options", "Print the option grid of a config's environment");
  cmd_enum->add_option("config", config_path, "Path to key=value config")->required();

  CLI::App* cmd_demo =
      app.add_subcommand("demo", "Run a built-in small config");
  cmd_demo
      ->add_option("framework", demo_framework,
                   "conventional|single-shot|perception-only|sensorimotor|"
                   "multimodal-sparse")
      ->required();
  add_common_flags(cmd_demo, demo_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (cmd_run->parsed()) {
      const asl::ExperimentConfig config =
          asl::load_config(config_path, run_flags.overrides());
      return run_one(config, config_stem(config_path), run_flags.quiet);
    }
    if (cmd_sweep->parsed()) {
      std::vector<std::string> values;
      std::string tok;
      std::istringstream ss(sweep_values);
      while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) values.push_back(tok);
      }
      if (values.empty()) throw asl::ConfigError("sweep: --values is empty");
      for (const std::string& value : values) {
        auto overrides = sweep_flags.overrides();
        overrides.emplace_back(sweep_param, value);
        const asl::ExperimentConfig config =
            asl::load_config(config_path, overrides);
        const std::string name = config_stem(config_path) + "_" +
                                 sanitize(sweep_param) + "_" + sanitize(value);
        if (!sweep_flags.quiet) std::cout << sweep_param << " = " << value << "\n";
        run_one(config, name, sweep_flags.quiet);
      }
      return kExitOk;
    }
    if (cmd_compare->parsed()) {
      const asl::MetricsReport a = asl::read_metrics(report_a);
      const asl::MetricsReport b = asl::read_metrics(report_b);
      const asl::ComparisonSummary summary =
          asl::compare(a, b, asl::compare_metric_from_string(metric_name));
      std::cout << asl::comparison_text(summary);
      std::cout << asl::comparison_json(summary) << "\n";
      return kExitOk;
    }
    if (cmd_enum->parsed()) {
      const asl::ExperimentConfig config = asl::load_config(config_path);
      for (int m = 0; m < config.env.num_modalities(); ++m) {
        const asl::OptionSpace& space =
            config.env.option_spaces[static_cast<std::size_t>(m)];
        std::cout << "modality " << m << " ("
                  << config.env.modality_names[static_cast<std::size_t>(m)]
                  << "), " << space.total_size() << " options\n";
        std::cout << "  axes:";
        for (const auto& ax : space.axes()) {
          std::cout << " " << ax.name << "[" << ax.lower << ".." << ax.upper
                    << " x" << ax.steps << "]";
        }
        std::cout << "\n";
        for (const asl::SensorOption& opt : asl::option_space_enumerate(space)) {
          std::cout << "  " << space.flat_index(opt.axis_index) << ":";
          for (double v : opt.values) std::cout << " " << v;
          std::cout << "\n";
        }
      }
      return kExitOk;
    }
    if (cmd_demo->parsed()) {
      auto overrides = demo_flags.overrides();
      const asl::ExperimentConfig config =
          asl::parse_config_text(demo_config_text(demo_framework), overrides);
      return run_one(config, "demo-" + sanitize(demo_framework), demo_flags.quiet);
    }
  } catch (const asl::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitValidation;
}
