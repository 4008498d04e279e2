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

#include "skatemount/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace skatemount {
namespace {

using nlohmann::json;

json vec3_json(const Vec3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3d vec3_from(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument("config: expected a 3-element array");
  }
  return Vec3d(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json vec12_json(const Vec12d& v) {
  json a = json::array();
  for (int i = 0; i < 12; ++i) a.push_back(v[i]);
  return a;
}

Vec12d vec12_from(const json& j) {
  if (!j.is_array() || j.size() != 12) {
    throw std::invalid_argument("config: expected a 12-element array");
  }
  Vec12d v;
  for (int i = 0; i < 12; ++i) v[i] = j[static_cast<size_t>(i)].get<double>();
  return v;
}

template <typename T>
void load_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

json contact_json(const ContactParamsd& c) {
  return json{{"stiffness", c.normal_stiffness},
              {"damping", c.normal_damping},
              {"friction", c.friction_coefficient}};
}

void contact_from(const json& j, ContactParamsd& c) {
  load_field(j, "stiffness", c.normal_stiffness);
  load_field(j, "damping", c.normal_damping);
  load_field(j, "friction", c.friction_coefficient);
}

json physics_json(const PhysicsConfig& p) {
  return json{{"dt", p.dt}, {"substeps", p.substeps}, {"gravity", p.gravity}};
}

void physics_from(const json& j, PhysicsConfig& p) {
  load_field(j, "dt", p.dt);
  load_field(j, "substeps", p.substeps);
  load_field(j, "gravity", p.gravity);
}

json board_json(const SkateboardParamsd& b) {
  return json{{"mass", b.mass},
              {"inertia_diagonal", vec3_json(b.inertia.diagonal())},
              {"deck_length", b.deck_length},
              {"deck_width", b.deck_width},
              {"deck_height", b.deck_height},
              {"wheelbase", b.wheelbase},
              {"track_width", b.track_width},
              {"wheel_radius", b.wheel_radius},
              {"bushing_stiffness", b.bushing_stiffness},
              {"bushing_damping", b.bushing_damping},
              {"roll_inertia", b.roll_inertia},
              {"max_tilt", b.max_tilt},
              {"corner_radius", b.corner_radius},
              {"wheel_contact", contact_json(b.wheel_contact)},
              {"corner_contact", contact_json(b.corner_contact)},
              {"tilt_when_fixed", b.tilt_when_fixed}};
}

void board_from(const json& j, SkateboardParamsd& b) {
  load_field(j, "mass", b.mass);
  if (j.contains("inertia_diagonal")) {
    b.inertia = vec3_from(j.at("inertia_diagonal")).asDiagonal();
  }
  load_field(j, "deck_length", b.deck_length);
  load_field(j, "deck_width", b.deck_width);
  load_field(j, "deck_height", b.deck_height);
  load_field(j, "wheelbase", b.wheelbase);
  load_field(j, "track_width", b.track_width);
  load_field(j, "wheel_radius", b.wheel_radius);
  load_field(j, "bushing_stiffness", b.bushing_stiffness);
  load_field(j, "bushing_damping", b.bushing_damping);
  load_field(j, "roll_inertia", b.roll_inertia);
  load_field(j, "max_tilt", b.max_tilt);
  load_field(j, "corner_radius", b.corner_radius);
  if (j.contains("wheel_contact")) contact_from(j.at("wheel_contact"), b.wheel_contact);
  if (j.contains("corner_contact")) contact_from(j.at("corner_contact"), b.corner_contact);
  load_field(j, "tilt_when_fixed", b.tilt_when_fixed);
}

json robot_json(const QuadrupedParamsd& r) {
  json hips = json::array();
  for (const auto& h : r.hip_offsets) hips.push_back(vec3_json(h));
  return json{{"trunk_mass", r.trunk.mass},
              {"trunk_inertia_diagonal", vec3_json(r.trunk.inertia.diagonal())},
              {"hip_offsets", hips},
              {"thigh_length", r.thigh_length},
              {"calf_length", r.calf_length},
              {"joint_lower", vec12_json(r.joint_lower)},
              {"joint_upper", vec12_json(r.joint_upper)},
              {"default_stance", vec12_json(r.default_stance)},
              {"pd_kp", r.pd_kp},
              {"pd_kd", r.pd_kd},
              {"torque_limit", r.torque_limit},
              {"joint_viscosity", r.joint_viscosity},
              {"foot_radius", r.foot_radius},
              {"foot_ground", contact_json(r.foot_ground)},
              {"foot_deck", contact_json(r.foot_deck)}};
}

void robot_from(const json& j, QuadrupedParamsd& r) {
  load_field(j, "trunk_mass", r.trunk.mass);
  if (j.contains("trunk_inertia_diagonal")) {
    r.trunk.inertia = vec3_from(j.at("trunk_inertia_diagonal")).asDiagonal();
  }
  if (j.contains("hip_offsets")) {
    const json& hips = j.at("hip_offsets");
    if (!hips.is_array() || hips.size() != 4) {
      throw std::invalid_argument("config: hip_offsets needs 4 entries");
    }
    for (size_t i = 0; i < 4; ++i) r.hip_offsets[i] = vec3_from(hips[i]);
  }
  load_field(j, "thigh_length", r.thigh_length);
  load_field(j, "calf_length", r.calf_length);
  if (j.contains("joint_lower")) r.joint_lower = vec12_from(j.at("joint_lower"));
  if (j.contains("joint_upper")) r.joint_upper = vec12_from(j.at("joint_upper"));
  if (j.contains("default_stance")) {
    r.default_stance = vec12_from(j.at("default_stance"));
  }
  load_field(j, "pd_kp", r.pd_kp);
  load_field(j, "pd_kd", r.pd_kd);
  load_field(j, "torque_limit", r.torque_limit);
  load_field(j, "joint_viscosity", r.joint_viscosity);
  load_field(j, "foot_radius", r.foot_radius);
  if (j.contains("foot_ground")) contact_from(j.at("foot_ground"), r.foot_ground);
  if (j.contains("foot_deck")) contact_from(j.at("foot_deck"), r.foot_deck);
}

json reward_json(const RewardConfig& r) {
  return json{{"sigma", r.sigma},
              {"distance_threshold", r.distance_threshold},
              {"use_3d_distance", r.use_3d_distance},
              {"tracking_sigma", r.tracking_sigma},
              {"w_feet_on_board", r.w_feet_on_board},
              {"w_orientation", r.w_orientation},
              {"w_distance", r.w_distance},
              {"w_flip", r.w_flip},
              {"w_skate_velocity", r.w_skate_velocity},
              {"w_lin_velocity_tracking", r.w_lin_velocity_tracking},
              {"w_ang_velocity_tracking", r.w_ang_velocity_tracking},
              {"w_flat_orientation", r.w_flat_orientation},
              {"w_action_rate", r.w_action_rate},
              {"w_joint_torque", r.w_joint_torque}};
}

void reward_from(const json& j, RewardConfig& r) {
  load_field(j, "sigma", r.sigma);
  load_field(j, "distance_threshold", r.distance_threshold);
  load_field(j, "use_3d_distance", r.use_3d_distance);
  load_field(j, "tracking_sigma", r.tracking_sigma);
  load_field(j, "w_feet_on_board", r.w_feet_on_board);
  load_field(j, "w_orientation", r.w_orientation);
  load_field(j, "w_distance", r.w_distance);
  load_field(j, "w_flip", r.w_flip);
  load_field(j, "w_skate_velocity", r.w_skate_velocity);
  load_field(j, "w_lin_velocity_tracking", r.w_lin_velocity_tracking);
  load_field(j, "w_ang_velocity_tracking", r.w_ang_velocity_tracking);
  load_field(j, "w_flat_orientation", r.w_flat_orientation);
  load_field(j, "w_action_rate", r.w_action_rate);
  load_field(j, "w_joint_torque", r.w_joint_torque);
}

json stage_json(const StageConfig& s) {
  return json{{"id", s.id},
              {"iterations", s.iterations},
              {"board_fixed", s.board_fixed},
              {"flip_termination", s.flip_termination},
              {"episode_seconds", s.episode_seconds},
              {"spawn_xy_noise", s.spawn_xy_noise},
              {"spawn_square_side", s.spawn_square_side},
              {"spawn_radius_min", s.spawn_radius_min},
              {"spawn_radius_max", s.spawn_radius_max},
              {"spawn_yaw_noise", s.spawn_yaw_noise},
              {"face_board", s.face_board},
              {"uniform_yaw", s.uniform_yaw},
              {"board_yaw_range", s.board_yaw_range},
              {"q_noise", s.q_noise},
              {"qd_noise", s.qd_noise},
              {"push_interval_steps", s.push_interval_steps},
              {"push_force", s.push_force},
              {"push_torque", s.push_torque},
              {"fall_height", s.fall_height},
              {"fall_tilt_gz", s.fall_tilt_gz},
              {"command_lin_x", s.command_lin_x},
              {"command_lin_y", s.command_lin_y},
              {"command_yaw", s.command_yaw},
              {"reward", reward_json(s.reward)}};
}

StageConfig stage_from(const json& j) {
  if (!j.contains("id")) {
    throw std::invalid_argument("config: every stage needs an \"id\"");
  }
  const std::string id = j.at("id").get<std::string>();
  const std::optional<StageId> parsed = parse_stage_id(id);
  if (!parsed) {
    throw std::invalid_argument("config: unknown stage id '" + id + "'");
  }
  StageConfig s = make_default_stage(*parsed);
  load_field(j, "iterations", s.iterations);
  load_field(j, "board_fixed", s.board_fixed);
  load_field(j, "flip_termination", s.flip_termination);
  load_field(j, "episode_seconds", s.episode_seconds);
  load_field(j, "spawn_xy_noise", s.spawn_xy_noise);
  load_field(j, "spawn_square_side", s.spawn_square_side);
  load_field(j, "spawn_radius_min", s.spawn_radius_min);
  load_field(j, "spawn_radius_max", s.spawn_radius_max);
  load_field(j, "spawn_yaw_noise", s.spawn_yaw_noise);
  load_field(j, "face_board", s.face_board);
  load_field(j, "uniform_yaw", s.uniform_yaw);
  load_field(j, "board_yaw_range", s.board_yaw_range);
  load_field(j, "q_noise", s.q_noise);
  load_field(j, "qd_noise", s.qd_noise);
  load_field(j, "push_interval_steps", s.push_interval_steps);
  load_field(j, "push_force", s.push_force);
  load_field(j, "push_torque", s.push_torque);
  load_field(j, "fall_height", s.fall_height);
  load_field(j, "fall_tilt_gz", s.fall_tilt_gz);
  load_field(j, "command_lin_x", s.command_lin_x);
  load_field(j, "command_lin_y", s.command_lin_y);
  load_field(j, "command_yaw", s.command_yaw);
  if (j.contains("reward")) reward_from(j.at("reward"), s.reward);
  return s;
}

json ppo_json(const PpoConfig& p) {
  return json{{"value_loss_coef", p.value_loss_coef},
              {"use_clipped_value_loss", p.use_clipped_value_loss},
              {"clip_param", p.clip_param},
              {"entropy_coef", p.entropy_coef},
              {"num_epochs", p.num_epochs},
              {"num_minibatches", p.num_minibatches},
              {"learning_rate", p.learning_rate},
              {"schedule", p.schedule},
              {"gamma", p.gamma},
              {"lam", p.lam},
              {"desired_kl", p.desired_kl},
              {"max_grad_norm", p.max_grad_norm},
              {"steps_per_env", p.steps_per_env},
              {"hidden_dims", p.hidden_dims},
              {"init_std", p.init_std}};
}

void ppo_from(const json& j, PpoConfig& p) {
  load_field(j, "value_loss_coef", p.value_loss_coef);
  load_field(j, "use_clipped_value_loss", p.use_clipped_value_loss);
  load_field(j, "clip_param", p.clip_param);
  load_field(j, "entropy_coef", p.entropy_coef);
  load_field(j, "num_epochs", p.num_epochs);
  load_field(j, "num_minibatches", p.num_minibatches);
  load_field(j, "learning_rate", p.learning_rate);
  load_field(j, "schedule", p.schedule);
  load_field(j, "gamma", p.gamma);
  load_field(j, "lam", p.lam);
  load_field(j, "desired_kl", p.desired_kl);
  load_field(j, "max_grad_norm", p.max_grad_norm);
  load_field(j, "steps_per_env", p.steps_per_env);
  load_field(j, "hidden_dims", p.hidden_dims);
  load_field(j, "init_std", p.init_std);
}

void check(std::vector<ConfigIssue>& issues, bool ok, ConfigSeverity severity,
           const std::string& path, const std::string& message) {
  if (!ok) issues.push_back({severity, path, message});
}

}  // namespace

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.stages = {make_default_stage(StageId::gait_pretrain),
                make_default_stage(StageId::above_board),
                make_default_stage(StageId::square_60cm),
                make_default_stage(StageId::adjacent),
                make_default_stage(StageId::free_board)};
  return cfg;
}

EnvParams make_env_params(const RunConfig& cfg) {
  EnvParams params;
  params.physics = cfg.physics;
  params.board = cfg.board;
  params.robot = cfg.robot;
  params.action_scale = cfg.action_scale;
  params.edge_point_spacing = cfg.edge_point_spacing;
  return params;
}

nlohmann::json to_json(const RunConfig& cfg) {
  json stages = json::array();
  for (const auto& s : cfg.stages) stages.push_back(stage_json(s));
  return json{{"seed", cfg.seed},
              {"num_envs", cfg.num_envs},
              {"output_dir", cfg.output_dir},
              {"checkpoint_every", cfg.checkpoint_every},
              {"deterministic_timing", cfg.deterministic_timing},
              {"physics", physics_json(cfg.physics)},
              {"skateboard", board_json(cfg.board)},
              {"robot", robot_json(cfg.robot)},
              {"action_scale", cfg.action_scale},
              {"edge_point_spacing", cfg.edge_point_spacing},
              {"ppo", ppo_json(cfg.ppo)},
              {"stages", stages}};
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig cfg = default_run_config();
  load_field(j, "seed", cfg.seed);
  load_field(j, "num_envs", cfg.num_envs);
  load_field(j, "output_dir", cfg.output_dir);
  load_field(j, "checkpoint_every", cfg.checkpoint_every);
  load_field(j, "deterministic_timing", cfg.deterministic_timing);
  if (j.contains("physics")) physics_from(j.at("physics"), cfg.physics);
  if (j.contains("skateboard")) board_from(j.at("skateboard"), cfg.board);
  if (j.contains("robot")) robot_from(j.at("robot"), cfg.robot);
  load_field(j, "action_scale", cfg.action_scale);
  load_field(j, "edge_point_spacing", cfg.edge_point_spacing);
  if (j.contains("ppo")) ppo_from(j.at("ppo"), cfg.ppo);
  if (j.contains("stages")) {
    cfg.stages.clear();
    for (const auto& s : j.at("stages")) cfg.stages.push_back(stage_from(s));
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("config: cannot open '" + path + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config: '" + path + "' is not valid JSON: " +
                             e.what());
  }
  return run_config_from_json(j);
}

void save_run_config(const std::string& path, const RunConfig& cfg) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("config: cannot write '" + path + "'");
  }
  out << to_json(cfg).dump(2) << "\n";
}

std::vector<ConfigIssue> validate_run_config(const RunConfig& cfg) {
  std::vector<ConfigIssue> issues;
  const auto err = ConfigSeverity::error;
  const auto warn = ConfigSeverity::warning;

  check(issues, cfg.num_envs >= 1, err, "num_envs", "need at least one environment");
  check(issues, cfg.checkpoint_every >= 0, err, "checkpoint_every",
        "must be zero (disabled) or positive");
  check(issues, cfg.physics.dt > 0.0, err, "physics.dt", "must be positive");
  check(issues, cfg.physics.substeps >= 1, err, "physics.substeps",
        "need at least one substep");
  check(issues, cfg.physics.gravity > 0.0, err, "physics.gravity",
        "must be positive (magnitude of downward gravity)");
  check(issues, cfg.action_scale > 0.0, err, "action_scale", "must be positive");
  check(issues, cfg.edge_point_spacing > 0.0, err, "edge_point_spacing",
        "must be positive");

  check(issues, cfg.board.mass > 0.0, err, "skateboard.mass", "must be positive");
  check(issues, cfg.board.roll_inertia > 0.0, err, "skateboard.roll_inertia",
        "must be positive");
  check(issues, cfg.robot.trunk.mass > 0.0, err, "robot.trunk_mass",
        "must be positive");
  check(issues, cfg.robot.joint_viscosity > 0.0, err, "robot.joint_viscosity",
        "must be positive");
  check(issues,
        (cfg.robot.joint_upper - cfg.robot.joint_lower).minCoeff() >= 0.0, err,
        "robot.joint_upper", "every upper limit must be >= its lower limit");

  const auto& p = cfg.ppo;
  check(issues, p.clip_param > 0.0 && p.clip_param < 1.0, err, "ppo.clip_param",
        "must lie in (0, 1)");
  check(issues, p.num_epochs >= 1, err, "ppo.num_epochs", "need at least one epoch");
  check(issues, p.num_minibatches >= 1, err, "ppo.num_minibatches",
        "need at least one minibatch");
  check(issues, p.steps_per_env >= 1, err, "ppo.steps_per_env",
        "need at least one rollout step");
  check(issues, p.gamma > 0.0 && p.gamma <= 1.0, err, "ppo.gamma",
        "must lie in (0, 1]");
  check(issues, p.lam >= 0.0 && p.lam <= 1.0, err, "ppo.lam",
        "must lie in [0, 1]");
  check(issues, p.max_grad_norm > 0.0, err, "ppo.max_grad_norm",
        "must be positive");
  check(issues, p.init_std > 0.0, err, "ppo.init_std", "must be positive");
  check(issues, !p.hidden_dims.empty(), err, "ppo.hidden_dims",
        "need at least one hidden layer");
  for (size_t i = 0; i < p.hidden_dims.size(); ++i) {
    check(issues, p.hidden_dims[i] >= 1, err,
          "ppo.hidden_dims[" + std::to_string(i) + "]", "must be positive");
  }
  check(issues, p.schedule == "adaptive" || p.schedule == "fixed", err,
        "ppo.schedule", "must be \"adaptive\" or \"fixed\"");
  check(issues, p.learning_rate >= 1.0e-5 && p.learning_rate <= 1.0e-2, warn,
        "ppo.learning_rate",
        "outside the adaptive bounds [1e-5, 1e-2]; the first adjustment will clamp it");
  if (p.num_minibatches >= 1 && p.steps_per_env >= 1 && cfg.num_envs >= 1) {
    const int64_t batch = static_cast<int64_t>(p.steps_per_env) * cfg.num_envs;
    check(issues, batch % p.num_minibatches == 0, warn, "ppo.num_minibatches",
          "does not divide steps_per_env * num_envs; minibatch sizes will be uneven");
  }

  check(issues, !cfg.stages.empty(), err, "stages", "need at least one stage");
  for (size_t i = 0; i < cfg.stages.size(); ++i) {
    const auto& s = cfg.stages[i];
    const std::string base = "stages[" + std::to_string(i) + "]";
    const std::optional<StageId> parsed_id = parse_stage_id(s.id);
    check(issues, parsed_id.has_value(), err, base + ".id",
          "unknown stage id '" + s.id + "'");
    check(issues, s.iterations >= 1, err, base + ".iterations",
          "need at least one iteration");
    check(issues, s.episode_seconds > 0.0, err, base + ".episode_seconds",
          "must be positive");
    check(issues, s.spawn_radius_min <= s.spawn_radius_max, err,
          base + ".spawn_radius_min", "exceeds spawn_radius_max");
    check(issues, s.spawn_radius_min >= 0.0, err, base + ".spawn_radius_min",
          "must be non-negative");
    check(issues, s.spawn_square_side >= 0.0, err, base + ".spawn_square_side",
          "must be non-negative");
    check(issues, s.fall_height > 0.0, err, base + ".fall_height",
          "must be positive");
    check(issues, s.reward.sigma > 0.0, err, base + ".reward.sigma",
          "must be positive");
    check(issues, s.reward.tracking_sigma > 0.0, err,
          base + ".reward.tracking_sigma", "must be positive");
    if (parsed_id && *parsed_id == StageId::square_60cm) {
      check(issues, std::abs(s.spawn_square_side - 0.6) < 1.0e-12, warn,
            base + ".spawn_square_side",
            "the square_60cm curriculum stage is defined with a 0.6 m spawn "
            "square; got " + std::to_string(s.spawn_square_side));
    }
  }
  return issues;
}

uint64_t config_hash(const RunConfig& cfg) {
  const std::string dump = to_json(cfg).dump();
  uint64_t hash = 1469598103934665603ull;
  for (const unsigned char c : dump) {
    hash ^= static_cast<uint64_t>(c);
    hash *= 1099511628211ull;
  }
  return hash;
}

}  // namespace skatemount
