// Copyright 2026 The skatemount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "skatemount/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <vector>

#include <CLI11.hpp>

#include "skatemount/checkpoint.hpp"
#include "skatemount/config.hpp"
#include "skatemount/evaluate.hpp"
#include "skatemount/metrics.hpp"
#include "skatemount/plot.hpp"
#include "skatemount/ppo.hpp"

namespace skatemount {
namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitOverwrite = 3;
constexpr int kExitDims = 4;

struct TrainArgs {
  std::string config_path;
  std::string stage;
  std::string resume;
  std::string output_dir;
  std::optional<uint64_t> seed;
  std::optional<int> num_envs;
  std::optional<int> iterations;
  bool force = false;
};

struct EvalArgs {
  std::string checkpoint;
  std::string config_path;
  std::string stage;
  std::string output_dir;
  std::optional<uint64_t> seed;
  int episodes = 10;
  bool deterministic = false;
};

struct PlotArgs {
  std::vector<std::string> inputs;
  std::string output_dir;
};

struct ValidateArgs {
  std::string config_path;
};

RunConfig load_or_default(const std::string& path) {
  if (path.empty()) return default_run_config();
  return load_run_config(path);
}

// Prints every issue; returns true when any is an error.
bool report_issues(const std::vector<ConfigIssue>& issues) {
  bool fatal = false;
  for (const auto& issue : issues) {
    const bool is_error = issue.severity == ConfigSeverity::error;
    std::cerr << (is_error ? "error: " : "warning: ") << issue.path << ": "
              << issue.message << "\n";
    fatal = fatal || is_error;
  }
  return fatal;
}

std::vector<StageConfig> select_stages(const RunConfig& cfg,
                                       const std::string& wanted,
                                       std::string* error) {
  if (wanted.empty()) return cfg.stages;
  for (const auto& stage : cfg.stages) {
    if (stage.id == wanted) return {stage};
  }
  std::string available;
  for (const auto& stage : cfg.stages) {
    if (!available.empty()) available += ", ";
    available += stage.id;
  }
  *error = "stage '" + wanted + "' is not in this config (available: " +
           available + ")";
  return {};
}

std::string dims_text(int obs, int cobs, int act) {
  return "obs " + std::to_string(obs) + ", critic obs " + std::to_string(cobs) +
         ", actions " + std::to_string(act);
}

int cmd_train(const TrainArgs& args) {
  RunConfig cfg = load_or_default(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  if (args.num_envs) cfg.num_envs = *args.num_envs;
  if (args.iterations) {
    for (auto& stage : cfg.stages) stage.iterations = *args.iterations;
  }
  if (report_issues(validate_run_config(cfg))) return kExitConfig;

  std::string stage_error;
  const std::vector<StageConfig> stages =
      select_stages(cfg, args.stage, &stage_error);
  if (stages.empty()) {
    std::cerr << "error: " << stage_error << "\n";
    return kExitConfig;
  }

  const std::string out_dir = resolve_output_dir(args.output_dir, cfg.output_dir);
  fs::create_directories(out_dir);
  std::vector<std::string> targets = {out_dir + "/config.json"};
  for (const auto& stage : stages) {
    targets.push_back(out_dir + "/" + stage.id + "_metrics.csv");
    targets.push_back(out_dir + "/" + stage.id + ".ckpt");
  }
  if (!args.force) {
    for (const auto& target : targets) {
      if (fs::exists(target)) {
        std::cerr << "error: '" << target
                  << "' already exists; pass --force to overwrite\n";
        return kExitOverwrite;
      }
    }
  }
  save_run_config(out_dir + "/config.json", cfg);

  const EnvParams params = make_env_params(cfg);
  const int obs_dim = observation_dim(params);
  const int critic_obs_dim = critic_observation_dim(params);
  const uint64_t hash = config_hash(cfg);

  GaussianPolicy policy;
  double learning_rate = cfg.ppo.learning_rate;
  if (!args.resume.empty()) {
    const Checkpoint ckpt = load_checkpoint(args.resume);
    if (ckpt.policy.obs_dim() != obs_dim ||
        ckpt.policy.critic_obs_dim() != critic_obs_dim ||
        ckpt.policy.action_dim() != 12) {
      std::cerr << "error: checkpoint '" << args.resume << "' carries "
                << dims_text(ckpt.policy.obs_dim(), ckpt.policy.critic_obs_dim(),
                             ckpt.policy.action_dim())
                << " but this config builds "
                << dims_text(obs_dim, critic_obs_dim, 12) << "\n";
      return kExitDims;
    }
    policy = ckpt.policy;
    learning_rate = ckpt.learning_rate;
    std::cout << "resumed from '" << args.resume << "' at iteration "
              << ckpt.iteration << "\n";
  } else {
    Rng init_rng = Rng::derive(cfg.seed, 31);
    policy = make_policy(obs_dim, critic_obs_dim, 12, cfg.ppo.hidden_dims,
                         cfg.ppo.init_std, init_rng);
  }

  const int threads = env_thread_count();
  bool first_stage = true;
  for (const auto& stage : stages) {
    // Each stage is a fresh optimization warm started from the carried
    // policy weights; only a resumed checkpoint preserves the learning rate.
    if (!first_stage || args.resume.empty()) {
      learning_rate = cfg.ppo.learning_rate;
    }
    EnvBatch env(params, stage, cfg.num_envs, cfg.seed, threads);
    AdamState adam = make_adam_state(policy);
    MetricsWriter metrics(out_dir + "/" + stage.id + "_metrics.csv", hash,
                          cfg.seed);
    const std::string ckpt_path = out_dir + "/" + stage.id + ".ckpt";

    std::cout << "stage " << stage.id << ": " << stage.iterations
              << " iterations, " << cfg.num_envs << " envs, " << threads
              << (threads == 1 ? " thread\n" : " threads\n");
    TrainOptions options;
    options.iterations = stage.iterations;
    options.deterministic_timing = cfg.deterministic_timing;
    options.checkpoint_every = cfg.checkpoint_every;
    options.on_iteration = [&](const TrainStats& row) {
      metrics.append(row);
      char line[192];
      std::snprintf(line, sizeof(line),
                    "  iter %4d/%d  reward %8.3f  len %6.1f  kl %.4f  lr %.2e",
                    row.iteration, stage.iterations, row.mean_ep_reward,
                    row.mean_ep_len, row.kl, row.lr);
      std::cout << line << "\n" << std::flush;
    };
    options.on_checkpoint = [&](int iteration) {
      save_checkpoint(ckpt_path,
                      {policy, learning_rate, iteration, cfg.seed});
    };
    train_stage(env, policy, adam, learning_rate, cfg.ppo, options, cfg.seed);
    std::cout << "stage " << stage.id << " done; checkpoint at " << ckpt_path
              << "\n";
    first_stage = false;
  }
  return kExitOk;
}

int cmd_eval(const EvalArgs& args) {
  const Checkpoint ckpt = load_checkpoint(args.checkpoint);
  RunConfig cfg = load_or_default(args.config_path);
  if (report_issues(validate_run_config(cfg))) return kExitConfig;

  std::string stage_error;
  std::vector<StageConfig> stages = select_stages(cfg, args.stage, &stage_error);
  if (stages.empty()) {
    std::cerr << "error: " << stage_error << "\n";
    return kExitConfig;
  }
  const StageConfig stage = args.stage.empty() ? cfg.stages.back() : stages.front();

  const EnvParams params = make_env_params(cfg);
  const int obs_dim = observation_dim(params);
  const int critic_obs_dim = critic_observation_dim(params);
  if (ckpt.policy.obs_dim() != obs_dim ||
      ckpt.policy.critic_obs_dim() != critic_obs_dim ||
      ckpt.policy.action_dim() != 12) {
    std::cerr << "error: checkpoint '" << args.checkpoint << "' carries "
              << dims_text(ckpt.policy.obs_dim(), ckpt.policy.critic_obs_dim(),
                           ckpt.policy.action_dim())
              << " but this config builds "
              << dims_text(obs_dim, critic_obs_dim, 12) << "\n";
    return kExitDims;
  }

  EvalConfig eval_cfg;
  eval_cfg.episodes = args.episodes;
  eval_cfg.deterministic = args.deterministic;
  eval_cfg.seed = args.seed ? *args.seed : cfg.seed;
  if (!args.output_dir.empty()) {
    fs::create_directories(args.output_dir);
    eval_cfg.trajectory_dir = args.output_dir;
  }

  std::cout << "evaluating '" << args.checkpoint << "' on stage " << stage.id
            << "\n";
  const EvalSummary summary =
      evaluate_policy(ckpt.policy, params, stage, eval_cfg);
  std::cout << format_eval_summary(summary);
  return kExitOk;
}

int cmd_plot(const PlotArgs& args) {
  for (const auto& input : args.inputs) {
    const fs::path in_path(input);
    fs::path out_path =
        args.output_dir.empty() ? in_path : fs::path(args.output_dir) / in_path.filename();
    out_path.replace_extension(".svg");
    const PlotResult result = plot_metrics(input, out_path.string());
    if (result.malformed_rows > 0) {
      std::cerr << "warning: skipped " << result.malformed_rows
                << " malformed row(s) in '" << input << "'\n";
    }
    if (!result.written) {
      std::cerr << "warning: '" << input
                << "' has no usable rows; no plot written\n";
      continue;
    }
    std::cout << "wrote " << result.output_path << " (" << result.rows
              << " rows)\n";
  }
  return kExitOk;
}

int cmd_validate(const ValidateArgs& args) {
  const RunConfig cfg = load_or_default(args.config_path);
  const auto issues = validate_run_config(cfg);
  const bool fatal = report_issues(issues);
  if (fatal) return kExitConfig;
  char line[64];
  std::snprintf(line, sizeof(line), "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  std::cout << "configuration OK (" << issues.size() << " warning(s), hash "
            << line << ")\n";
  return kExitOk;
}

}  // namespace

std::string resolve_output_dir(const std::string& cli_value,
                               const std::string& config_value) {
  if (!cli_value.empty()) return cli_value;
  if (!config_value.empty()) return config_value;
  const char* env = std::getenv("SKATEMOUNT_OUTPUT_DIR");
  if (env != nullptr && env[0] != '\0') return env;
  return "./runs";
}

int env_thread_count() {
  const char* env = std::getenv("SKATEMOUNT_THREADS");
  if (env == nullptr || env[0] == '\0') return 1;
  const long value = std::strtol(env, nullptr, 10);
  return value >= 1 ? static_cast<int>(value) : 1;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Quadruped skateboard-mounting trainer"};
  app.require_subcommand(1);

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "Train the mounting curriculum");
  train->add_option("--config", train_args.config_path, "Run config JSON")
      ->check(CLI::ExistingFile);
  train->add_option("--stage", train_args.stage, "Train only this stage id");
  train->add_option("--resume", train_args.resume, "Warm start from a checkpoint")
      ->check(CLI::ExistingFile);
  train->add_option("--seed", train_args.seed, "Master seed override");
  train->add_option("--num-envs", train_args.num_envs, "Environment count override");
  train->add_option("--iterations", train_args.iterations,
                    "Iteration count override for every selected stage");
  train->add_option("--output-dir", train_args.output_dir,
                    "Run directory (metrics, checkpoints, config)");
  train->add_flag("--force", train_args.force, "Overwrite existing outputs");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval->add_option("checkpoint", eval_args.checkpoint, "Checkpoint file")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--config", eval_args.config_path, "Run config JSON")
      ->check(CLI::ExistingFile);
  eval->add_option("--stage", eval_args.stage,
                   "Stage id to evaluate on (default: the config's last stage)");
  eval->add_option("--episodes", eval_args.episodes, "Episode count")
      ->check(CLI::NonNegativeNumber);
  eval->add_flag("--deterministic", eval_args.deterministic,
                 "Use mean actions instead of sampling");
  eval->add_option("--seed", eval_args.seed, "Evaluation seed override");
  eval->add_option("--output-dir", eval_args.output_dir,
                   "Write per-episode trajectory CSVs here");

  PlotArgs plot_args;
  CLI::App* plot = app.add_subcommand("plot", "Render metrics CSVs to SVG");
  plot->add_option("inputs", plot_args.inputs, "Metrics CSV files")
      ->required()
      ->check(CLI::ExistingFile);
  plot->add_option("--output-dir", plot_args.output_dir,
                   "Directory for the SVGs (default: next to each input)");

  ValidateArgs validate_args;
  CLI::App* validate = app.add_subcommand("validate", "Check a run config");
  validate->add_option("--config", validate_args.config_path, "Run config JSON")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (train->parsed()) return cmd_train(train_args);
    if (eval->parsed()) return cmd_eval(eval_args);
    if (plot->parsed()) return cmd_plot(plot_args);
    if (validate->parsed()) return cmd_validate(validate_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace skatemount
