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

#ifndef SKATEMOUNT_ENV_HPP_
#define SKATEMOUNT_ENV_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "skatemount/quadruped.hpp"
#include "skatemount/rng.hpp"
#include "skatemount/skateboard.hpp"

namespace skatemount {

struct PhysicsConfig {
  double dt = 1.0 / 200.0;  // s, physics substep
  int substeps = 4;         // substeps per control step (50 Hz control)
  double gravity = 9.81;    // m/s^2
  double control_dt() const { return dt * substeps; }
  Vec3d gravity_vector() const { return Vec3d(0.0, 0.0, -gravity); }
};

// Mounting terms plus the always-on locomotion terms; weights are applied to
// the unweighted term values in declaration order.
struct RewardConfig {
  double sigma = 0.5;                  // spatial kernel scale
  double distance_threshold = 0.5;     // m, gates the orientation term
  bool use_3d_distance = false;        // default: horizontal base-to-deck
  double tracking_sigma = 0.25;        // velocity tracking kernel scale
  double w_feet_on_board = 2.5;
  double w_orientation = 1.0;
  double w_distance = 1.5;
  double w_flip = -10.0;
  double w_skate_velocity = -0.5;
  double w_lin_velocity_tracking = 1.0;
  double w_ang_velocity_tracking = 0.5;
  double w_flat_orientation = -0.5;
  double w_action_rate = -0.01;
  double w_joint_torque = -2e-4;
};

struct RewardBreakdown {
  double feet_on_board = 0.0;
  double orientation = 0.0;
  double distance = 0.0;
  double flip = 0.0;
  double skate_velocity = 0.0;
  double lin_velocity_tracking = 0.0;
  double ang_velocity_tracking = 0.0;
  double flat_orientation = 0.0;
  double action_rate = 0.0;
  double joint_torque = 0.0;
  double total = 0.0;
};

struct TotalRewardInputs {
  std::array<bool, 4> feet_contact{};
  double theta_rel = 0.0;    // rad, wrapped absolute relative yaw in [0, pi]
  double distance = 0.0;     // m
  double board_g_z = 0.0;    // gravity z in the deck frame, normalized
  Vec2d skate_velocity_xy = Vec2d::Zero();
  Vec3d command = Vec3d::Zero();            // vx, vy (body frame), yaw rate
  Vec2d base_velocity_xy = Vec2d::Zero();   // body frame
  double base_yaw_rate = 0.0;               // body frame z
  Vec2d gravity_xy = Vec2d::Zero();         // trunk projected gravity, horizontal
  Vec12d action_delta = Vec12d::Zero();
  Vec12d joint_torques = Vec12d::Zero();
};

double reward_feet_on_board(const std::array<bool, 4>& contact_flags);
double reward_orientation(double theta_rel, double distance,
                          const RewardConfig& cfg);
double reward_distance(double distance, const RewardConfig& cfg);
double reward_flip(double board_g_z);
double reward_skate_velocity(const Vec2d& skate_velocity_xy);
RewardBreakdown total_reward(const TotalRewardInputs& in, const RewardConfig& cfg);

enum class StageId {
  gait_pretrain,
  forward_baseline,
  above_board,
  square_60cm,
  adjacent,
  free_board,
};

std::string to_string(StageId id);
std::optional<StageId> parse_stage_id(const std::string& name);

// One curriculum stage: spawn law, board mode, perturbations, termination
// set, and reward weights. Position samplers, highest precedence first:
// spawn_square_side > 0 samples a deck-frame axis-aligned square centered on
// the deck; spawn_radius_max > 0 samples an area-uniform annulus around the
// deck; otherwise the base spawns over the deck center with spawn_xy_noise
// jitter. Nominal heading: face_board aims at the deck center, uniform_yaw
// draws from the full circle, else the heading copies the board yaw; a
// uniform spawn_yaw_noise is added on top.
struct StageConfig {
  std::string id = "above_board";
  int iterations = 300;
  bool board_fixed = true;
  bool flip_termination = false;
  double episode_seconds = 5.0;
  double spawn_xy_noise = 0.02;
  double spawn_square_side = 0.0;
  double spawn_radius_min = 0.0;
  double spawn_radius_max = 0.0;
  double spawn_yaw_noise = 0.1;
  bool face_board = false;
  bool uniform_yaw = false;
  double board_yaw_range = 3.14159265358979323846;
  double q_noise = 0.05;         // rad, uniform around the default stance
  double qd_noise = 0.1;         // rad/s, uniform
  int push_interval_steps = 0;   // control steps between pushes; 0 disables
  double push_force = 0.0;       // N, uniform per world axis
  double push_torque = 0.0;      // N*m, uniform per body axis
  double fall_height = 0.35;     // m, trunk below this terminates
  double fall_tilt_gz = -0.8;    // trunk gravity z above this terminates
  double command_lin_x = 0.0;    // m/s, per-episode uniform command ranges
  double command_lin_y = 0.0;
  double command_yaw = 0.0;      // rad/s
  RewardConfig reward;
};

// Stage presets encoding the curriculum narrative; tweakable via config.
StageConfig make_default_stage(StageId id);

enum class Termination { running, timeout, fell, board_flipped };

std::string to_string(Termination cause);

struct EnvParams {
  PhysicsConfig physics;
  SkateboardParamsd board;
  QuadrupedParamsd robot;
  double action_scale = 0.25;       // rad of joint target per policy unit
  double edge_point_spacing = 0.1;  // m, nominal deck perimeter sampling
};

struct Observation {
  Eigen::VectorXd policy;
  Eigen::VectorXd critic;
};

int edge_point_count(const EnvParams& params);
int observation_dim(const EnvParams& params);
int critic_observation_dim(const EnvParams& params);

// Policy vector layout: joint positions relative to the default stance (12),
// scaled joint velocities (12), scaled base angular velocity (3), projected
// gravity (3), velocity command (3), deck center in the base frame (3),
// relative deck yaw as sin/cos (2), deck edge points in the base frame
// (3 per point), foot-deck contact flags (4). The critic vector appends the
// base linear velocity in the base frame (3).
Observation build_observation(const QuadrupedStated& robot,
                              const SkateboardStated& board,
                              const std::array<bool, 4>& deck_contact,
                              const Vec3d& command, const EnvParams& params);

struct EnvState {
  QuadrupedStated robot;
  SkateboardStated board;
  int step_count = 0;
  Vec3d command = Vec3d::Zero();
  Vec12d prev_action = Vec12d::Zero();
  Vec3d push_force = Vec3d::Zero();    // world frame, active this control step
  Vec3d push_torque = Vec3d::Zero();   // body frame
  std::array<bool, 4> deck_contact{};
  Rng rng;  // per-environment stream: spawns, pushes, commands
};

int episode_step_budget(const StageConfig& stage, const EnvParams& params);

Termination check_termination(const EnvState& env, const StageConfig& stage,
                              const EnvParams& params);

// Samples a fresh episode state from the stage's spawn law. The rng is taken
// by value and stored advanced inside the returned state, so one stream per
// environment persists across episodes.
EnvState reset_env(const StageConfig& stage, const EnvParams& params, Rng rng);

// Samples (or clears) the push applied over the next control step.
void apply_push_perturbation(EnvState& env, const StageConfig& stage);

struct EnvStepOutput {
  Observation observation;  // post-reset when the episode ended
  RewardBreakdown reward;
  Termination termination = Termination::running;
  bool done = false;
  std::array<bool, 4> deck_contact{};  // terminal-state flags, pre-reset
};

// Advances one environment by one control step (substeps physics steps),
// computes the reward on the post-step state, applies termination and
// auto-reset.
EnvStepOutput step_env(EnvState& env, const Vec12d& action,
                       const StageConfig& stage, const EnvParams& params);

// Vectorized environments with per-environment RNG streams derived from the
// master seed, so serial and parallel stepping produce identical results.
class EnvBatch {
 public:
  EnvBatch(const EnvParams& params, const StageConfig& stage, int num_envs,
           uint64_t master_seed, int threads = 1);

  void reset_all();

  struct BatchStep {
    Eigen::MatrixXd observations;
    Eigen::MatrixXd critic_observations;
    Eigen::VectorXd rewards;
    std::vector<uint8_t> dones;
    std::vector<Termination> causes;
    std::vector<RewardBreakdown> breakdowns;
  };

  // actions: [num_envs x 12] raw policy outputs.
  BatchStep step(const Eigen::MatrixXd& actions);

  const Eigen::MatrixXd& observations() const { return observations_; }
  const Eigen::MatrixXd& critic_observations() const { return critic_observations_; }
  int num_envs() const { return static_cast<int>(states_.size()); }
  int obs_dim() const { return observation_dim(params_); }
  int critic_obs_dim() const { return critic_observation_dim(params_); }
  const StageConfig& stage() const { return stage_; }
  const EnvParams& params() const { return params_; }
  const EnvState& state(int index) const { return states_.at(index); }

 private:
  void refresh_observation(int index);

  EnvParams params_;
  StageConfig stage_;
  int threads_;
  uint64_t master_seed_;
  std::vector<EnvState> states_;
  Eigen::MatrixXd observations_;
  Eigen::MatrixXd critic_observations_;
};

}  // namespace skatemount

#endif  // SKATEMOUNT_ENV_HPP_
