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

#include "skatemount/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <utility>

namespace skatemount {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kJointVelocityScale = 0.05;
constexpr double kAngularVelocityScale = 0.25;

double wrap_angle(double radians) { return std::remainder(radians, 2.0 * kPi); }

double quat_yaw(const Quatd& q) {
  return std::atan2(2.0 * (q.w() * q.z() + q.x() * q.y()),
                    1.0 - 2.0 * (q.y() * q.y() + q.z() * q.z()));
}

bool over_deck(const Vec2d& point_xy, const SkateboardStated& board,
               const SkateboardParamsd& params) {
  const double yaw = quat_yaw(board.deck.orientation);
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  const Vec2d rel = point_xy - board.deck.position.head<2>();
  const double x = c * rel.x() + s * rel.y();
  const double y = -s * rel.x() + c * rel.y();
  return std::abs(x) <= params.deck_length / 2.0 &&
         std::abs(y) <= params.deck_width / 2.0;
}

}  // namespace

double reward_feet_on_board(const std::array<bool, 4>& contact_flags) {
  double count = 0.0;
  for (bool flag : contact_flags) {
    count += flag ? 1.0 : 0.0;
  }
  return count;
}

double reward_orientation(double theta_rel, double distance,
                          const RewardConfig& cfg) {
  if (distance >= cfg.distance_threshold) {
    return 0.0;
  }
  return std::exp(-(theta_rel / kPi) / (cfg.sigma * cfg.sigma));
}

double reward_distance(double distance, const RewardConfig& cfg) {
  return std::exp(-distance / (cfg.sigma * cfg.sigma));
}

double reward_flip(double board_g_z) { return board_g_z > 0.0 ? 1.0 : 0.0; }

double reward_skate_velocity(const Vec2d& skate_velocity_xy) {
  return skate_velocity_xy.norm();
}

RewardBreakdown total_reward(const TotalRewardInputs& in,
                             const RewardConfig& cfg) {
  RewardBreakdown out;
  out.feet_on_board = reward_feet_on_board(in.feet_contact);
  out.orientation = reward_orientation(in.theta_rel, in.distance, cfg);
  out.distance = reward_distance(in.distance, cfg);
  out.flip = reward_flip(in.board_g_z);
  out.skate_velocity = reward_skate_velocity(in.skate_velocity_xy);
  out.lin_velocity_tracking =
      std::exp(-(in.command.head<2>() - in.base_velocity_xy).squaredNorm() /
               cfg.tracking_sigma);
  out.ang_velocity_tracking =
      std::exp(-(in.command.z() - in.base_yaw_rate) *
               (in.command.z() - in.base_yaw_rate) / cfg.tracking_sigma);
  out.flat_orientation = in.gravity_xy.squaredNorm();
  out.action_rate = in.action_delta.squaredNorm();
  out.joint_torque = in.joint_torques.squaredNorm();
  out.total = cfg.w_feet_on_board * out.feet_on_board +
              cfg.w_orientation * out.orientation +
              cfg.w_distance * out.distance + cfg.w_flip * out.flip +
              cfg.w_skate_velocity * out.skate_velocity +
              cfg.w_lin_velocity_tracking * out.lin_velocity_tracking +
              cfg.w_ang_velocity_tracking * out.ang_velocity_tracking +
              cfg.w_flat_orientation * out.flat_orientation +
              cfg.w_action_rate * out.action_rate +
              cfg.w_joint_torque * out.joint_torque;
  return out;
}

std::string to_string(StageId id) {
  switch (id) {
    case StageId::gait_pretrain:
      return "gait_pretrain";
    case StageId::forward_baseline:
      return "forward_baseline";
    case StageId::above_board:
      return "above_board";
    case StageId::square_60cm:
      return "square_60cm";
    case StageId::adjacent:
      return "adjacent";
    case StageId::free_board:
      return "free_board";
  }
  return "unknown";
}

std::optional<StageId> parse_stage_id(const std::string& name) {
  for (StageId id :
       {StageId::gait_pretrain, StageId::forward_baseline, StageId::above_board,
        StageId::square_60cm, StageId::adjacent, StageId::free_board}) {
    if (to_string(id) == name) {
      return id;
    }
  }
  return std::nullopt;
}

std::string to_string(Termination cause) {
  switch (cause) {
    case Termination::running:
      return "running";
    case Termination::timeout:
      return "timeout";
    case Termination::fell:
      return "fell";
    case Termination::board_flipped:
      return "board_flipped";
  }
  return "unknown";
}

StageConfig make_default_stage(StageId id) {
  StageConfig s;
  s.id = to_string(id);
  switch (id) {
    case StageId::gait_pretrain:
      s.iterations = 500;
      s.spawn_radius_min = 1.5;
      s.spawn_radius_max = 3.0;
      s.uniform_yaw = true;
      s.spawn_yaw_noise = 0.0;
      s.q_noise = 0.1;
      s.qd_noise = 0.5;
      s.push_interval_steps = 100;
      s.push_force = 10.0;
      s.push_torque = 2.0;
      s.fall_height = 0.22;
      s.fall_tilt_gz = -0.5;
      s.command_lin_x = 1.0;
      s.command_lin_y = 0.5;
      s.command_yaw = 1.0;
      break;
    case StageId::forward_baseline:
      s.iterations = 1000;
      s.spawn_radius_min = 0.3;
      s.spawn_radius_max = 1.5;
      s.uniform_yaw = true;
      s.spawn_yaw_noise = 0.0;
      s.q_noise = 0.2;
      s.qd_noise = 0.5;
      s.push_interval_steps = 100;
      s.push_force = 10.0;
      s.push_torque = 2.0;
      s.fall_height = 0.22;
      s.fall_tilt_gz = -0.5;
      break;
    case StageId::above_board:
      s.iterations = 500;
      break;
    case StageId::square_60cm:
      s.iterations = 800;
      s.spawn_square_side = 0.6;
      s.uniform_yaw = true;
      s.spawn_yaw_noise = 0.0;
      s.q_noise = 0.2;
      s.qd_noise = 0.5;
      s.push_interval_steps = 100;
      s.push_force = 10.0;
      s.push_torque = 2.0;
      s.fall_height = 0.22;
      s.fall_tilt_gz = -0.5;
      break;
    case StageId::adjacent:
      s.iterations = 1000;
      s.spawn_radius_min = 0.5;
      s.spawn_radius_max = 1.0;
      s.face_board = true;
      s.spawn_yaw_noise = 0.5;
      s.q_noise = 0.2;
      s.qd_noise = 0.5;
      s.push_interval_steps = 100;
      s.push_force = 10.0;
      s.push_torque = 2.0;
      s.fall_height = 0.22;
      s.fall_tilt_gz = -0.5;
      break;
    case StageId::free_board:
      s.iterations = 600;
      s.board_fixed = false;
      s.flip_termination = true;
      s.spawn_radius_min = 0.5;
      s.spawn_radius_max = 1.0;
      s.face_board = true;
      s.spawn_yaw_noise = 0.5;
      s.q_noise = 0.2;
      s.qd_noise = 0.5;
      s.push_interval_steps = 100;
      s.push_force = 10.0;
      s.push_torque = 2.0;
      s.fall_height = 0.22;
      s.fall_tilt_gz = -0.5;
      break;
  }
  return s;
}

int edge_point_count(const EnvParams& params) {
  return static_cast<int>(
      deck_edge_points(params.board, params.edge_point_spacing).size());
}

int observation_dim(const EnvParams& params) {
  return 12 + 12 + 3 + 3 + 3 + 3 + 2 + 3 * edge_point_count(params) + 4;
}

int critic_observation_dim(const EnvParams& params) {
  return observation_dim(params) + 3;
}

Observation build_observation(const QuadrupedStated& robot,
                              const SkateboardStated& board,
                              const std::array<bool, 4>& deck_contact,
                              const Vec3d& command, const EnvParams& params) {
  const Mat3d base_rotation = robot.base.orientation.toRotationMatrix();
  const Mat3d to_base = base_rotation.transpose();
  const int dim = observation_dim(params);

  Observation obs;
  obs.policy.resize(dim);
  int at = 0;
  obs.policy.segment<12>(at) = robot.q - params.robot.default_stance;
  at += 12;
  obs.policy.segment<12>(at) = kJointVelocityScale * robot.qd;
  at += 12;
  obs.policy.segment<3>(at) =
      kAngularVelocityScale * robot.base.angular_velocity;
  at += 3;
  obs.policy.segment<3>(at) = project_gravity(robot.base.orientation);
  at += 3;
  obs.policy.segment<3>(at) = command;
  at += 3;
  obs.policy.segment<3>(at) = to_base * (board.deck.position - robot.base.position);
  at += 3;
  const double yaw_rel =
      wrap_angle(quat_yaw(board.deck.orientation) - quat_yaw(robot.base.orientation));
  obs.policy[at++] = std::sin(yaw_rel);
  obs.policy[at++] = std::cos(yaw_rel);
  const Isometry3d plate = deck_surface_frame(board);
  for (const Vec3d& point : deck_edge_points(params.board, params.edge_point_spacing)) {
    obs.policy.segment<3>(at) = to_base * (plate * point - robot.base.position);
    at += 3;
  }
  for (int leg = 0; leg < 4; ++leg) {
    obs.policy[at++] = deck_contact[leg] ? 1.0 : 0.0;
  }

  obs.critic.resize(dim + 3);
  obs.critic.head(dim) = obs.policy;
  obs.critic.tail<3>() = to_base * robot.base.linear_velocity;
  return obs;
}

int episode_step_budget(const StageConfig& stage, const EnvParams& params) {
  return static_cast<int>(
      std::lround(stage.episode_seconds / params.physics.control_dt()));
}

Termination check_termination(const EnvState& env, const StageConfig& stage,
                              const EnvParams& params) {
  if (env.step_count >= episode_step_budget(stage, params)) {
    return Termination::timeout;
  }
  if (env.robot.base.position.z() < stage.fall_height ||
      project_gravity(env.robot.base.orientation).z() > stage.fall_tilt_gz) {
    return Termination::fell;
  }
  if (stage.flip_termination) {
    const auto [g_z, flipped] =
        board_up_vector_flip(env.board, params.physics.gravity_vector());
    if (flipped) {
      return Termination::board_flipped;
    }
  }
  return Termination::running;
}

EnvState reset_env(const StageConfig& stage, const EnvParams& params, Rng rng) {
  if (stage.spawn_radius_max > 0.0 &&
      stage.spawn_radius_min > stage.spawn_radius_max) {
    throw std::invalid_argument("reset_env: spawn radius range inverted");
  }

  EnvState env;

  const double board_yaw = rng.symmetric(stage.board_yaw_range);
  env.board = skateboard_rest_state(params.board, Vec2d(Vec2d::Zero()), board_yaw,
                                    params.physics.gravity, stage.board_fixed);

  // Spawn offset in the deck frame, then rotated to the world.
  Vec2d offset_deck;
  if (stage.spawn_square_side > 0.0) {
    offset_deck.x() = rng.symmetric(stage.spawn_square_side / 2.0);
    offset_deck.y() = rng.symmetric(stage.spawn_square_side / 2.0);
  } else if (stage.spawn_radius_max > 0.0) {
    const double angle = rng.symmetric(kPi);
    const double r_min_sq = stage.spawn_radius_min * stage.spawn_radius_min;
    const double r_max_sq = stage.spawn_radius_max * stage.spawn_radius_max;
    const double radius = std::sqrt(r_min_sq + rng.uniform() * (r_max_sq - r_min_sq));
    offset_deck = radius * Vec2d(std::cos(angle), std::sin(angle));
  } else {
    offset_deck.x() = rng.symmetric(stage.spawn_xy_noise);
    offset_deck.y() = rng.symmetric(stage.spawn_xy_noise);
  }
  const double cos_b = std::cos(board_yaw);
  const double sin_b = std::sin(board_yaw);
  const Vec2d offset_world(cos_b * offset_deck.x() - sin_b * offset_deck.y(),
                           sin_b * offset_deck.x() + cos_b * offset_deck.y());
  const Vec2d base_xy = env.board.deck.position.head<2>() + offset_world;

  double nominal_yaw = board_yaw;
  if (stage.face_board) {
    nominal_yaw = std::atan2(-offset_world.y(), -offset_world.x());
  } else if (stage.uniform_yaw) {
    nominal_yaw = rng.symmetric(kPi);
  }
  const double base_yaw = wrap_angle(nominal_yaw + rng.symmetric(stage.spawn_yaw_noise));

  for (int i = 0; i < 12; ++i) {
    env.robot.q[i] = std::clamp(
        params.robot.default_stance[i] + rng.symmetric(stage.q_noise),
        params.robot.joint_lower[i], params.robot.joint_upper[i]);
  }
  for (int i = 0; i < 12; ++i) {
    env.robot.qd[i] = rng.symmetric(stage.qd_noise);
  }

  env.command.x() = rng.symmetric(stage.command_lin_x);
  env.command.y() = rng.symmetric(stage.command_lin_y);
  env.command.z() = rng.symmetric(stage.command_yaw);

  // Base height so the lowest foot, given its support (deck top or ground),
  // just reaches contact, less the static spring compression.
  env.robot.base.orientation =
      Quatd(Eigen::AngleAxisd(base_yaw, Vec3d::UnitZ()));
  double base_z = 0.0;
  const double cos_y = std::cos(base_yaw);
  const double sin_y = std::sin(base_yaw);
  for (int leg = 0; leg < 4; ++leg) {
    const Vec3d foot_body = leg_forward_kinematics<double>(
        env.robot.q.segment<3>(3 * leg), params.robot.hip_offsets[leg],
        params.robot);
    const Vec2d foot_xy(
        base_xy.x() + cos_y * foot_body.x() - sin_y * foot_body.y(),
        base_xy.y() + sin_y * foot_body.x() + cos_y * foot_body.y());
    const double support_z = over_deck(foot_xy, env.board, params.board)
                                 ? env.board.deck.position.z()
                                 : 0.0;
    base_z = std::max(base_z,
                      support_z + params.robot.foot_radius - foot_body.z());
  }
  const double settle = params.robot.trunk.mass * params.physics.gravity /
                        (4.0 * params.robot.foot_ground.normal_stiffness);
  env.robot.base.position = Vec3d(base_xy.x(), base_xy.y(), base_z - settle);

  env.rng = rng;
  return env;
}

void apply_push_perturbation(EnvState& env, const StageConfig& stage) {
  env.push_force = Vec3d::Zero();
  env.push_torque = Vec3d::Zero();
  if (stage.push_interval_steps <= 0 || env.step_count == 0 ||
      env.step_count % stage.push_interval_steps != 0) {
    return;
  }
  for (int i = 0; i < 3; ++i) {
    env.push_force[i] = env.rng.symmetric(stage.push_force);
  }
  for (int i = 0; i < 3; ++i) {
    env.push_torque[i] = env.rng.symmetric(stage.push_torque);
  }
}

EnvStepOutput step_env(EnvState& env, const Vec12d& action,
                       const StageConfig& stage, const EnvParams& params) {
  if (!action.allFinite()) {
    throw std::invalid_argument("step_env: non-finite action");
  }
  apply_push_perturbation(env, stage);

  JointCommandd command;
  command.targets =
      params.robot.default_stance + params.action_scale * action;
  const Vec3d gravity = params.physics.gravity_vector();

  RobotStepResult<double> robot_result;
  for (int substep = 0; substep < params.physics.substeps; ++substep) {
    robot_result =
        step_robot(env.robot, command, params.robot, env.board, params.board,
                   gravity, env.push_force, env.push_torque, params.physics.dt);
    env.board = step_skateboard(env.board, robot_result.deck_loads,
                                params.board, gravity, params.physics.dt);
    env.robot = robot_result.state;
  }
  env.step_count += 1;
  env.deck_contact = robot_result.deck_contact;

  const Mat3d to_base = env.robot.base.orientation.toRotationMatrix().transpose();
  const auto [board_g_z, flipped] = board_up_vector_flip(env.board, gravity);

  TotalRewardInputs in;
  in.feet_contact = robot_result.deck_contact;
  in.theta_rel = std::abs(wrap_angle(quat_yaw(env.board.deck.orientation) -
                                     quat_yaw(env.robot.base.orientation)));
  const Vec3d to_board = env.board.deck.position - env.robot.base.position;
  in.distance = stage.reward.use_3d_distance ? to_board.norm()
                                             : to_board.head<2>().norm();
  in.board_g_z = board_g_z;
  in.skate_velocity_xy = env.board.fixed
                             ? Vec2d(Vec2d::Zero())
                             : Vec2d(env.board.deck.linear_velocity.head<2>());
  in.command = env.command;
  in.base_velocity_xy = (to_base * env.robot.base.linear_velocity).head<2>();
  in.base_yaw_rate = env.robot.base.angular_velocity.z();
  in.gravity_xy = project_gravity(env.robot.base.orientation).head<2>();
  in.action_delta = action - env.prev_action;
  in.joint_torques = robot_result.applied_torques;

  EnvStepOutput out;
  out.reward = total_reward(in, stage.reward);
  env.prev_action = action;

  out.termination = check_termination(env, stage, params);
  out.done = out.termination != Termination::running;
  out.deck_contact = robot_result.deck_contact;
  if (out.done) {
    env = reset_env(stage, params, std::move(env.rng));
  }
  out.observation = build_observation(env.robot, env.board, env.deck_contact,
                                      env.command, params);
  return out;
}

EnvBatch::EnvBatch(const EnvParams& params, const StageConfig& stage,
                   int num_envs, uint64_t master_seed, int threads)
    : params_(params),
      stage_(stage),
      threads_(std::max(1, threads)),
      master_seed_(master_seed) {
  if (num_envs <= 0) {
    throw std::invalid_argument("EnvBatch: need at least one environment");
  }
  states_.resize(num_envs);
  observations_.resize(num_envs, obs_dim());
  critic_observations_.resize(num_envs, critic_obs_dim());
  reset_all();
}

void EnvBatch::reset_all() {
  for (size_t i = 0; i < states_.size(); ++i) {
    states_[i] = reset_env(stage_, params_,
                           Rng::derive(master_seed_, static_cast<uint64_t>(i)));
    refresh_observation(static_cast<int>(i));
  }
}

void EnvBatch::refresh_observation(int index) {
  const EnvState& env = states_[index];
  const Observation obs = build_observation(env.robot, env.board,
                                            env.deck_contact, env.command,
                                            params_);
  observations_.row(index) = obs.policy.transpose();
  critic_observations_.row(index) = obs.critic.transpose();
}

EnvBatch::BatchStep EnvBatch::step(const Eigen::MatrixXd& actions) {
  const int n = num_envs();
  if (actions.rows() != n || actions.cols() != 12) {
    throw std::invalid_argument("EnvBatch::step: action batch size mismatch");
  }
  BatchStep out;
  out.observations.resize(n, obs_dim());
  out.critic_observations.resize(n, critic_obs_dim());
  out.rewards.resize(n);
  out.dones.assign(n, 0);
  out.causes.assign(n, Termination::running);
  out.breakdowns.assign(n, RewardBreakdown{});

  auto worker = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const Vec12d action = actions.row(i).transpose();
      const EnvStepOutput result = step_env(states_[i], action, stage_, params_);
      out.observations.row(i) = result.observation.policy.transpose();
      out.critic_observations.row(i) = result.observation.critic.transpose();
      out.rewards[i] = result.reward.total;
      out.dones[i] = result.done ? 1 : 0;
      out.causes[i] = result.termination;
      out.breakdowns[i] = result.reward;
      observations_.row(i) = result.observation.policy.transpose();
      critic_observations_.row(i) = result.observation.critic.transpose();
    }
  };

  const int workers = std::min(threads_, n);
  if (workers <= 1) {
    worker(0, n);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(n, begin + chunk);
      if (begin >= end) {
        break;
      }
      pool.emplace_back(worker, begin, end);
    }
    for (std::thread& t : pool) {
      t.join();
    }
  }
  return out;
}

}  // namespace skatemount
