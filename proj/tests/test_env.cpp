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

#include <doctest.h>

#include <cmath>

#include "skatemount/env.hpp"
#include "skatemount/rng.hpp"

namespace skatemount {
namespace {

constexpr double kPi = 3.14159265358979323846;

double yaw_of(const Quatd& q) {
  return std::atan2(2.0 * (q.w() * q.z() + q.x() * q.y()),
                    1.0 - 2.0 * (q.y() * q.y() + q.z() * q.z()));
}

TEST_CASE("feet-on-board reward counts raised flags") {
  CHECK(reward_feet_on_board({false, false, false, false}) == 0.0);
  CHECK(reward_feet_on_board({true, false, false, false}) == 1.0);
  CHECK(reward_feet_on_board({true, false, true, false}) == 2.0);
  CHECK(reward_feet_on_board({true, true, true, true}) == 4.0);
}

TEST_CASE("orientation reward gates to exactly zero far from the board") {
  RewardConfig cfg;
  CHECK(reward_orientation(0.0, cfg.distance_threshold, cfg) == 0.0);
  CHECK(reward_orientation(0.0, cfg.distance_threshold + 1e-12, cfg) == 0.0);
  CHECK(reward_orientation(1.0, 10.0, cfg) == 0.0);

  // Inside the gate: a normalized-angle exponential kernel.
  CHECK(reward_orientation(0.0, 0.0, cfg) == 1.0);
  CHECK(reward_orientation(kPi, 0.1, cfg) ==
        doctest::Approx(std::exp(-1.0 / (cfg.sigma * cfg.sigma))));
  CHECK(reward_orientation(kPi / 2.0, 0.49, cfg) ==
        doctest::Approx(std::exp(-0.5 / (cfg.sigma * cfg.sigma))));
}

TEST_CASE("distance reward is an exponential kernel with no gate") {
  RewardConfig cfg;
  CHECK(reward_distance(0.0, cfg) == 1.0);
  CHECK(reward_distance(1.0, cfg) ==
        doctest::Approx(std::exp(-1.0 / (cfg.sigma * cfg.sigma))));
  CHECK(reward_distance(3.0, cfg) ==
        doctest::Approx(std::exp(-3.0 / 0.25)));
}

TEST_CASE("flip reward is the indicator of an overturned board") {
  CHECK(reward_flip(0.5) == 1.0);
  CHECK(reward_flip(1e-12) == 1.0);
  CHECK(reward_flip(0.0) == 0.0);
  CHECK(reward_flip(-1.0) == 0.0);
}

TEST_CASE("skate velocity reward is the planar speed") {
  CHECK(reward_skate_velocity(Vec2d(Vec2d::Zero())) == 0.0);
  CHECK(reward_skate_velocity(Vec2d(3.0, 4.0)) == doctest::Approx(5.0));
}

TEST_CASE("the weighted total matches an independent scalar re-evaluation") {
  RewardConfig cfg;
  Rng rng = Rng::derive(41, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    TotalRewardInputs in;
    for (int i = 0; i < 4; ++i) in.feet_contact[i] = rng.uniform() < 0.5;
    in.theta_rel = rng.uniform(0.0, kPi);
    in.distance = rng.uniform(0.0, 2.0);
    in.board_g_z = rng.uniform(-1.0, 1.0);
    in.skate_velocity_xy = Vec2d(rng.normal(), rng.normal());
    in.command = Vec3d(rng.normal(), rng.normal(), rng.normal());
    in.base_velocity_xy = Vec2d(rng.normal(), rng.normal());
    in.base_yaw_rate = rng.normal();
    in.gravity_xy = Vec2d(0.3 * rng.normal(), 0.3 * rng.normal());
    for (int i = 0; i < 12; ++i) in.action_delta[i] = rng.normal();
    for (int i = 0; i < 12; ++i) in.joint_torques[i] = 10.0 * rng.normal();

    const RewardBreakdown out = total_reward(in, cfg);

    // Scalar oracle, written without the library helpers.
    double feet = 0.0;
    for (int i = 0; i < 4; ++i) feet += in.feet_contact[i] ? 1.0 : 0.0;
    const double sig2 = cfg.sigma * cfg.sigma;
    const double orient = in.distance >= cfg.distance_threshold
                              ? 0.0
                              : std::exp(-(in.theta_rel / kPi) / sig2);
    const double dist = std::exp(-in.distance / sig2);
    const double flip = in.board_g_z > 0.0 ? 1.0 : 0.0;
    const double skate = std::hypot(in.skate_velocity_xy.x(),
                                    in.skate_velocity_xy.y());
    const double ex = in.command.x() - in.base_velocity_xy.x();
    const double ey = in.command.y() - in.base_velocity_xy.y();
    const double lin = std::exp(-(ex * ex + ey * ey) / cfg.tracking_sigma);
    const double ez = in.command.z() - in.base_yaw_rate;
    const double ang = std::exp(-ez * ez / cfg.tracking_sigma);
    const double flat = in.gravity_xy.x() * in.gravity_xy.x() +
                        in.gravity_xy.y() * in.gravity_xy.y();
    double rate = 0.0, torque = 0.0;
    for (int i = 0; i < 12; ++i) {
      rate += in.action_delta[i] * in.action_delta[i];
      torque += in.joint_torques[i] * in.joint_torques[i];
    }
    const double expected =
        cfg.w_feet_on_board * feet + cfg.w_orientation * orient +
        cfg.w_distance * dist + cfg.w_flip * flip + cfg.w_skate_velocity * skate +
        cfg.w_lin_velocity_tracking * lin + cfg.w_ang_velocity_tracking * ang +
        cfg.w_flat_orientation * flat + cfg.w_action_rate * rate +
        cfg.w_joint_torque * torque;

    CHECK(out.feet_on_board == feet);
    CHECK(std::abs(out.orientation - orient) < 1e-12);
    CHECK(std::abs(out.distance - dist) < 1e-12);
    CHECK(out.flip == flip);
    CHECK(std::abs(out.skate_velocity - skate) < 1e-12);
    CHECK(std::abs(out.total - expected) < 1e-12);
  }
}

TEST_CASE("stage ids round trip through their names") {
  for (StageId id : {StageId::gait_pretrain, StageId::forward_baseline,
                     StageId::above_board, StageId::square_60cm,
                     StageId::adjacent, StageId::free_board}) {
    const auto parsed = parse_stage_id(to_string(id));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == id);
  }
  CHECK_FALSE(parse_stage_id("not_a_stage").has_value());
}

TEST_CASE("observation dimensions follow the layout arithmetic") {
  EnvParams params;
  CHECK(edge_point_count(params) == 16);
  CHECK(observation_dim(params) == 90);
  CHECK(critic_observation_dim(params) == 93);

  // Coarser perimeter sampling shrinks the vector in steps of three.
  EnvParams coarse = params;
  coarse.edge_point_spacing = 0.2;
  CHECK(edge_point_count(coarse) == 8);
  CHECK(observation_dim(coarse) == 90 - 3 * 8);
}

TEST_CASE("the observation vector is laid out as documented") {
  EnvParams params;
  QuadrupedStated robot;
  robot.q = params.robot.default_stance;
  robot.q[5] += 0.1;
  robot.qd[3] = 2.0;
  robot.base.position = Vec3d(0.0, 0.0, 0.45);
  robot.base.angular_velocity = Vec3d(0.4, -0.8, 1.2);

  const SkateboardStated board = skateboard_rest_state(
      params.board, Vec2d(1.0, 2.0), 0.3, params.physics.gravity, true);
  const std::array<bool, 4> contact{true, false, true, false};
  const Vec3d command(0.5, -0.25, 0.1);

  const Observation obs = build_observation(robot, board, contact, command, params);
  REQUIRE(obs.policy.size() == 90);
  REQUIRE(obs.critic.size() == 93);

  // Joint positions relative to the stance.
  for (int i = 0; i < 12; ++i) {
    const double expected = i == 5 ? 0.1 : 0.0;
    CHECK(obs.policy[i] == doctest::Approx(expected).epsilon(1e-12));
  }
  // Scaled joint velocities.
  CHECK(obs.policy[12 + 3] == 0.05 * 2.0);
  CHECK(obs.policy[12 + 4] == 0.0);
  // Scaled base angular velocity.
  CHECK(obs.policy[24] == 0.25 * 0.4);
  CHECK(obs.policy[25] == 0.25 * -0.8);
  CHECK(obs.policy[26] == 0.25 * 1.2);
  // Projected gravity at identity orientation.
  CHECK(obs.policy[27] == 0.0);
  CHECK(obs.policy[28] == 0.0);
  CHECK(obs.policy[29] == -1.0);
  // Command passthrough.
  CHECK(obs.policy[30] == 0.5);
  CHECK(obs.policy[31] == -0.25);
  CHECK(obs.policy[32] == 0.1);
  // Deck center in the base frame (identity base at 0.45 height).
  CHECK(obs.policy[33] == doctest::Approx(1.0));
  CHECK(obs.policy[34] == doctest::Approx(2.0));
  CHECK(obs.policy[35] ==
        doctest::Approx(board.deck.position.z() - 0.45).epsilon(1e-12));
  // Relative deck yaw.
  CHECK(obs.policy[36] == doctest::Approx(std::sin(0.3)));
  CHECK(obs.policy[37] == doctest::Approx(std::cos(0.3)));
  // Edge points in the base frame.
  const Isometry3d plate = deck_surface_frame(board);
  const auto points = deck_edge_points(params.board, params.edge_point_spacing);
  for (int p = 0; p < 16; ++p) {
    const Vec3d expected = plate * points[p] - robot.base.position;
    for (int k = 0; k < 3; ++k) {
      CHECK(obs.policy[38 + 3 * p + k] ==
            doctest::Approx(expected[k]).epsilon(1e-12));
    }
  }
  // Contact flags.
  CHECK(obs.policy[86] == 1.0);
  CHECK(obs.policy[87] == 0.0);
  CHECK(obs.policy[88] == 1.0);
  CHECK(obs.policy[89] == 0.0);
  // Critic: policy vector plus base linear velocity.
  CHECK((obs.critic.head(90) - obs.policy).norm() == 0.0);
  CHECK(obs.critic[90] == 0.0);
  CHECK(obs.critic[91] == 0.0);
  CHECK(obs.critic[92] == 0.0);
}

TEST_CASE("observations are invariant under a shared yaw and translation") {
  EnvParams params;
  const StageConfig stage = make_default_stage(StageId::square_60cm);
  Rng rng = Rng::derive(42, 0);

  for (int trial = 0; trial < 50; ++trial) {
    EnvState env = reset_env(stage, params, Rng::derive(43, trial));
    env.robot.base.linear_velocity = Vec3d(rng.normal(), rng.normal(), rng.normal());
    env.robot.base.angular_velocity = Vec3d(rng.normal(), rng.normal(), rng.normal());
    const Observation before = build_observation(env.robot, env.board,
                                                 env.deck_contact, env.command,
                                                 params);

    const double phi = rng.uniform(-kPi, kPi);
    const Quatd rot(Eigen::AngleAxisd(phi, Vec3d::UnitZ()));
    const Vec3d shift(rng.normal() * 5.0, rng.normal() * 5.0, rng.normal());

    EnvState moved = env;
    moved.robot.base.position = rot * env.robot.base.position + shift;
    moved.robot.base.orientation = rot * env.robot.base.orientation;
    moved.robot.base.linear_velocity = rot * env.robot.base.linear_velocity;
    moved.board.deck.position = rot * env.board.deck.position + shift;
    moved.board.deck.orientation = rot * env.board.deck.orientation;

    const Observation after = build_observation(moved.robot, moved.board,
                                                moved.deck_contact, moved.command,
                                                params);
    CHECK((after.policy - before.policy).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((after.critic - before.critic).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("episode budgets and termination precedence") {
  EnvParams params;
  StageConfig stage = make_default_stage(StageId::above_board);
  CHECK(episode_step_budget(stage, params) == 250);

  EnvState env = reset_env(stage, params, Rng::derive(44, 0));
  CHECK(check_termination(env, stage, params) == Termination::running);

  // Timeout wins even when the robot is also down.
  env.step_count = 250;
  env.robot.base.position.z() = 0.0;
  CHECK(check_termination(env, stage, params) == Termination::timeout);

  // A fallen robot: base too low.
  env.step_count = 10;
  CHECK(check_termination(env, stage, params) == Termination::fell);

  // A tilted robot falls too, via the projected-gravity threshold.
  env = reset_env(stage, params, Rng::derive(44, 1));
  env.robot.base.orientation =
      Quatd(Eigen::AngleAxisd(1.2, Vec3d::UnitY()));
  CHECK(project_gravity(env.robot.base.orientation).z() > stage.fall_tilt_gz);
  CHECK(check_termination(env, stage, params) == Termination::fell);

  // Board flip only terminates when the stage asks for it, and a fallen
  // robot takes precedence over the flip cause.
  StageConfig flip_stage = make_default_stage(StageId::free_board);
  EnvState flip_env = reset_env(flip_stage, params, Rng::derive(44, 2));
  flip_env.board.deck.orientation =
      Quatd(Eigen::AngleAxisd(kPi, Vec3d::UnitX()));
  CHECK(check_termination(flip_env, flip_stage, params) ==
        Termination::board_flipped);
  flip_env.robot.base.position.z() = 0.0;
  CHECK(check_termination(flip_env, flip_stage, params) == Termination::fell);

  StageConfig no_flip = flip_stage;
  no_flip.flip_termination = false;
  EnvState no_flip_env = reset_env(no_flip, params, Rng::derive(44, 3));
  no_flip_env.board.deck.orientation =
      Quatd(Eigen::AngleAxisd(kPi, Vec3d::UnitX()));
  CHECK(check_termination(no_flip_env, no_flip, params) ==
        Termination::running);
}

TEST_CASE("the square spawn law lands inside the deck-frame square") {
  EnvParams params;
  const StageConfig stage = make_default_stage(StageId::square_60cm);
  REQUIRE(stage.spawn_square_side == 0.6);

  for (int i = 0; i < 2000; ++i) {
    const EnvState env = reset_env(stage, params, Rng::derive(45, i));
    const double board_yaw = yaw_of(env.board.deck.orientation);
    const Vec2d rel = env.robot.base.position.head<2>() -
                      env.board.deck.position.head<2>();
    const double c = std::cos(board_yaw);
    const double s = std::sin(board_yaw);
    const Vec2d in_deck(c * rel.x() + s * rel.y(), -s * rel.x() + c * rel.y());
    CHECK(std::abs(in_deck.x()) <= 0.3 + 1e-12);
    CHECK(std::abs(in_deck.y()) <= 0.3 + 1e-12);
  }
}

TEST_CASE("the annulus spawn law is area uniform between its radii") {
  EnvParams params;
  const StageConfig stage = make_default_stage(StageId::gait_pretrain);
  REQUIRE(stage.spawn_radius_min == 1.5);
  REQUIRE(stage.spawn_radius_max == 3.0);

  double sum_r2 = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const EnvState env = reset_env(stage, params, Rng::derive(46, i));
    const double r = (env.robot.base.position.head<2>() -
                      env.board.deck.position.head<2>())
                         .norm();
    CHECK(r >= 1.5 - 1e-9);
    CHECK(r <= 3.0 + 1e-9);
    sum_r2 += r * r;
  }
  // Area uniformity: r^2 is uniform on [r_min^2, r_max^2], mean 5.625.
  CHECK(sum_r2 / n == doctest::Approx(5.625).epsilon(0.02));
}

TEST_CASE("the default spawn hovers over the deck with small jitter") {
  EnvParams params;
  const StageConfig stage = make_default_stage(StageId::above_board);
  for (int i = 0; i < 500; ++i) {
    const EnvState env = reset_env(stage, params, Rng::derive(47, i));
    const Vec2d rel = env.robot.base.position.head<2>() -
                      env.board.deck.position.head<2>();
    CHECK(rel.norm() <= stage.spawn_xy_noise * std::sqrt(2.0) + 1e-12);
    // Heading follows the board up to the yaw noise.
    const double dyaw = std::remainder(
        yaw_of(env.robot.base.orientation) - yaw_of(env.board.deck.orientation),
        2.0 * kPi);
    CHECK(std::abs(dyaw) <= stage.spawn_yaw_noise + 1e-12);
    // Joint state inside limits and near the stance.
    for (int j = 0; j < 12; ++j) {
      CHECK(env.robot.q[j] >= params.robot.joint_lower[j]);
      CHECK(env.robot.q[j] <= params.robot.joint_upper[j]);
      CHECK(std::abs(env.robot.q[j] - params.robot.default_stance[j]) <=
            stage.q_noise + 1e-12);
      CHECK(std::abs(env.robot.qd[j]) <= stage.qd_noise + 1e-12);
    }
    CHECK(env.command.norm() == 0.0);
  }
}

TEST_CASE("facing spawns aim the heading at the deck center") {
  EnvParams params;
  const StageConfig stage = make_default_stage(StageId::adjacent);
  REQUIRE(stage.face_board);
  for (int i = 0; i < 500; ++i) {
    const EnvState env = reset_env(stage, params, Rng::derive(48, i));
    const Vec2d rel = env.board.deck.position.head<2>() -
                      env.robot.base.position.head<2>();
    const double to_board = std::atan2(rel.y(), rel.x());
    const double dyaw = std::remainder(
        yaw_of(env.robot.base.orientation) - to_board, 2.0 * kPi);
    CHECK(std::abs(dyaw) <= stage.spawn_yaw_noise + 1e-12);
  }
}

TEST_CASE("spawned feet rest exactly on their supports") {
  EnvParams params;
  const StageConfig stage = make_default_stage(StageId::square_60cm);
  const double settle = params.robot.trunk.mass * params.physics.gravity /
                        (4.0 * params.robot.foot_ground.normal_stiffness);
  for (int i = 0; i < 200; ++i) {
    const EnvState env = reset_env(stage, params, Rng::derive(49, i));
    const auto feet = forward_kinematics(env.robot.q, env.robot.base, params.robot);
    const Isometry3d plate = deck_surface_frame(env.board);
    double lowest_clearance = 1e9;
    for (const Vec3d& foot : feet) {
      const Vec3d local = plate.inverse() * foot;
      const bool on_deck =
          std::abs(local.x()) <= params.board.deck_length / 2.0 &&
          std::abs(local.y()) <= params.board.deck_width / 2.0;
      const double support = on_deck ? env.board.deck.position.z() : 0.0;
      lowest_clearance = std::min(
          lowest_clearance, foot.z() - support - params.robot.foot_radius + settle);
    }
    // The binding foot touches its support exactly; none penetrate further.
    CHECK(std::abs(lowest_clearance) < 1e-9);
  }
}

TEST_CASE("reset draws an inverted radius range as an error") {
  EnvParams params;
  StageConfig stage = make_default_stage(StageId::gait_pretrain);
  stage.spawn_radius_min = 2.0;
  stage.spawn_radius_max = 1.0;
  CHECK_THROWS_AS(reset_env(stage, params, Rng::derive(50, 0)),
                  std::invalid_argument);
}

TEST_CASE("pushes fire on the stage cadence with bounded magnitude") {
  EnvParams params;
  StageConfig stage = make_default_stage(StageId::gait_pretrain);
  REQUIRE(stage.push_interval_steps == 100);

  EnvState env = reset_env(stage, params, Rng::derive(51, 0));
  env.step_count = 0;
  apply_push_perturbation(env, stage);
  CHECK(env.push_force.norm() == 0.0);  // never on the first step

  env.step_count = 100;
  apply_push_perturbation(env, stage);
  CHECK(env.push_force.norm() > 0.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(env.push_force[i]) <= stage.push_force);
    CHECK(std::abs(env.push_torque[i]) <= stage.push_torque);
  }

  env.step_count = 101;
  apply_push_perturbation(env, stage);
  CHECK(env.push_force.norm() == 0.0);
  CHECK(env.push_torque.norm() == 0.0);

  StageConfig quiet = make_default_stage(StageId::above_board);
  REQUIRE(quiet.push_interval_steps == 0);
  env.step_count = 100;
  apply_push_perturbation(env, quiet);
  CHECK(env.push_force.norm() == 0.0);
}

TEST_CASE("episodes time out and reset automatically") {
  EnvParams params;
  StageConfig stage = make_default_stage(StageId::above_board);
  stage.episode_seconds = 3.0 * params.physics.control_dt();

  EnvState env = reset_env(stage, params, Rng::derive(52, 0));
  const Vec12d action = Vec12d::Zero();
  EnvStepOutput out = step_env(env, action, stage, params);
  CHECK_FALSE(out.done);
  out = step_env(env, action, stage, params);
  CHECK_FALSE(out.done);
  out = step_env(env, action, stage, params);
  CHECK(out.done);
  CHECK(out.termination == Termination::timeout);
  // The environment came back reset: fresh counter, fresh spawn.
  CHECK(env.step_count == 0);
  CHECK(env.robot.base.position.z() > stage.fall_height);
}

TEST_CASE("a single-environment batch mirrors the scalar stepper") {
  EnvParams params;
  const StageConfig stage = make_default_stage(StageId::above_board);
  const uint64_t seed = 77;

  EnvBatch batch(params, stage, 1, seed);
  EnvState env = reset_env(stage, params, Rng::derive(seed, 0));

  const Observation first = build_observation(env.robot, env.board,
                                              env.deck_contact, env.command,
                                              params);
  CHECK((batch.observations().row(0).transpose() - first.policy).norm() == 0.0);

  Rng action_rng = Rng::derive(99, 0);
  for (int step = 0; step < 20; ++step) {
    Vec12d action;
    for (int i = 0; i < 12; ++i) action[i] = 0.5 * action_rng.normal();
    Eigen::MatrixXd actions(1, 12);
    actions.row(0) = action.transpose();

    const auto batch_out = batch.step(actions);
    const auto scalar_out = step_env(env, action, stage, params);
    CHECK(batch_out.rewards[0] == scalar_out.reward.total);
    CHECK((batch_out.dones[0] == 1) == scalar_out.done);
    CHECK((batch_out.observations.row(0).transpose() -
           scalar_out.observation.policy)
              .norm() == 0.0);
    CHECK((batch_out.critic_observations.row(0).transpose() -
           scalar_out.observation.critic)
              .norm() == 0.0);
  }
}

TEST_CASE("batch stepping is bitwise identical across thread counts") {
  EnvParams params;
  const StageConfig stage = make_default_stage(StageId::square_60cm);
  const uint64_t seed = 123;
  const int n = 7;  // odd count so thread chunks are uneven

  EnvBatch serial(params, stage, n, seed, 1);
  EnvBatch threaded(params, stage, n, seed, 3);
  CHECK((serial.observations() - threaded.observations()).norm() == 0.0);

  Rng action_rng = Rng::derive(100, 0);
  for (int step = 0; step < 15; ++step) {
    Eigen::MatrixXd actions(n, 12);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < 12; ++j) actions(i, j) = 0.5 * action_rng.normal();
    }
    const auto a = serial.step(actions);
    const auto b = threaded.step(actions);
    CHECK((a.observations - b.observations).norm() == 0.0);
    CHECK((a.critic_observations - b.critic_observations).norm() == 0.0);
    CHECK((a.rewards - b.rewards).norm() == 0.0);
    CHECK(a.dones == b.dones);
  }
}

TEST_CASE("fixed-board stages report zero skate speed") {
  EnvParams params;
  StageConfig stage = make_default_stage(StageId::above_board);
  REQUIRE(stage.board_fixed);
  EnvState env = reset_env(stage, params, Rng::derive(53, 0));
  const auto out = step_env(env, Vec12d(Vec12d::Zero()), stage, params);
  CHECK(out.reward.skate_velocity == 0.0);
}

TEST_CASE("batch stepping rejects the wrong action shape") {
  EnvParams params;
  const StageConfig stage = make_default_stage(StageId::above_board);
  EnvBatch batch(params, stage, 2, 5);
  Eigen::MatrixXd bad(2, 11);
  bad.setZero();
  CHECK_THROWS_AS(batch.step(bad), std::invalid_argument);
  CHECK_THROWS_AS(EnvBatch(params, stage, 0, 5), std::invalid_argument);
}

}  // namespace
}  // namespace skatemount
