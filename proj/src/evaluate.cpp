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

#include "skatemount/evaluate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace skatemount {
namespace {

// A mount counts once all four feet stay on the deck for a full second.
int sustain_steps(const EnvParams& params) {
  return static_cast<int>(std::lround(1.0 / params.physics.control_dt()));
}

std::string trajectory_path(const std::string& dir, int episode) {
  char name[64];
  std::snprintf(name, sizeof(name), "episode_%03d.csv", episode);
  return dir + "/" + name;
}

}  // namespace

EvalSummary evaluate_policy(const GaussianPolicy& policy,
                            const EnvParams& params, const StageConfig& stage,
                            const EvalConfig& cfg) {
  EvalSummary summary;
  if (cfg.episodes <= 0) {
    return summary;
  }

  EnvBatch env(params, stage, 1, cfg.seed);
  Rng noise = Rng::derive(cfg.seed, 9999);
  const int mount_window = sustain_steps(params);
  const int step_budget = episode_step_budget(stage, params);

  for (int episode = 0; episode < cfg.episodes; ++episode) {
    EpisodeResult result;
    std::ofstream trajectory;
    if (!cfg.trajectory_dir.empty()) {
      const std::string path = trajectory_path(cfg.trajectory_dir, episode);
      trajectory.open(path, std::ios::trunc);
      if (!trajectory) {
        throw std::runtime_error("evaluate: cannot write '" + path + "'");
      }
      trajectory << "step,time_s,reward,feet,base_x,base_y,base_z,"
                    "board_x,board_y,board_z\n";
    }

    int consecutive_full = 0;
    int first_contact_step = -1;
    int mount_start_step = -1;
    double feet_sum = 0.0;
    bool done = false;
    // Hard cap so a policy that never terminates cannot hang evaluation.
    for (int step = 0; step < 4 * step_budget && !done; ++step) {
      const Vec3d base_position = env.state(0).robot.base.position;
      const Vec3d board_position = env.state(0).board.deck.position;
      Eigen::MatrixXd actions(1, policy.action_dim());
      if (cfg.deterministic) {
        actions = act_mean(policy, env.observations());
      } else {
        const Eigen::VectorXd obs = env.observations().row(0).transpose();
        actions.row(0) = sample_action(policy, obs, noise).first.transpose();
      }
      const EnvBatch::BatchStep out = env.step(actions);

      const double feet = out.breakdowns[0].feet_on_board;
      feet_sum += feet;
      result.total_reward += out.rewards(0);
      result.length += 1;
      if (feet > 0.0 && first_contact_step < 0) first_contact_step = step;
      if (feet == 4.0) {
        consecutive_full += 1;
        if (consecutive_full >= mount_window && !result.mounted) {
          result.mounted = true;
          mount_start_step = step - (mount_window - 1);
        }
      } else {
        consecutive_full = 0;
      }
      if (trajectory.is_open()) {
        char line[256];
        std::snprintf(line, sizeof(line),
                      "%d,%.3f,%.9g,%g,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", step,
                      step * params.physics.control_dt(), out.rewards(0), feet,
                      base_position.x(), base_position.y(), base_position.z(),
                      board_position.x(), board_position.y(),
                      board_position.z());
        trajectory << line;
      }
      done = out.dones[0] != 0;
      if (done) result.cause = out.causes[0];
    }
    if (result.mounted) {
      result.time_to_mount = (mount_start_step - first_contact_step) *
                             params.physics.control_dt();
    }
    result.mean_feet =
        result.length > 0 ? feet_sum / static_cast<double>(result.length) : 0.0;
    summary.per_episode.push_back(result);
  }

  summary.episodes = static_cast<int>(summary.per_episode.size());
  double mounted = 0.0, reward = 0.0, length = 0.0, feet = 0.0, mount_time = 0.0;
  int mounted_count = 0;
  for (const auto& e : summary.per_episode) {
    mounted += e.mounted ? 1.0 : 0.0;
    reward += e.total_reward;
    length += e.length;
    feet += e.mean_feet;
    if (e.mounted) {
      mount_time += e.time_to_mount;
      mounted_count += 1;
    }
  }
  const double n = static_cast<double>(summary.episodes);
  summary.success_rate = mounted / n;
  summary.mean_reward = reward / n;
  summary.mean_length = length / n;
  summary.mean_feet = feet / n;
  summary.mean_time_to_mount =
      mounted_count > 0 ? mount_time / mounted_count : -1.0;
  return summary;
}

std::string format_eval_summary(const EvalSummary& summary) {
  std::ostringstream out;
  out << "episodes: " << summary.episodes << "\n";
  if (summary.episodes == 0) {
    return out.str();
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "success_rate: %.3f\n", summary.success_rate);
  out << buf;
  std::snprintf(buf, sizeof(buf), "mean_reward: %.6g\n", summary.mean_reward);
  out << buf;
  std::snprintf(buf, sizeof(buf), "mean_episode_steps: %.1f\n",
                summary.mean_length);
  out << buf;
  std::snprintf(buf, sizeof(buf), "mean_feet_on_board: %.3f\n",
                summary.mean_feet);
  out << buf;
  if (summary.mean_time_to_mount >= 0.0) {
    std::snprintf(buf, sizeof(buf), "mean_time_to_mount_s: %.3f\n",
                  summary.mean_time_to_mount);
    out << buf;
  } else {
    out << "mean_time_to_mount_s: n/a\n";
  }
  return out.str();
}

}  // namespace skatemount
