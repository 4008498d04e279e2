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

#ifndef SKATEMOUNT_QUADRUPED_HPP_
#define SKATEMOUNT_QUADRUPED_HPP_

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "skatemount/dynamics.hpp"
#include "skatemount/skateboard.hpp"

namespace skatemount {

template <typename Scalar>
using Vec12 = Eigen::Matrix<Scalar, 12, 1>;
using Vec12d = Vec12<double>;

// Legs are massless kinematic chains: all inertia sits in the trunk, and
// foot contact forces act on the trunk at the foot's world position. Joint
// order is leg-major (FL, FR, RL, RR), per leg (hip roll, hip pitch, knee).
template <typename Scalar>
struct QuadrupedParams {
  InertialParams<Scalar> trunk{
      Scalar(12.0),
      Vec3<Scalar>(Scalar(0.08), Scalar(0.14), Scalar(0.20)).asDiagonal()};
  std::array<Vec3<Scalar>, 4> hip_offsets = {
      Vec3<Scalar>(Scalar(0.18), Scalar(0.13), Scalar(0)),
      Vec3<Scalar>(Scalar(0.18), Scalar(-0.13), Scalar(0)),
      Vec3<Scalar>(Scalar(-0.18), Scalar(0.13), Scalar(0)),
      Vec3<Scalar>(Scalar(-0.18), Scalar(-0.13), Scalar(0))};
  Scalar thigh_length = Scalar(0.2);
  Scalar calf_length = Scalar(0.2);
  Vec12<Scalar> joint_lower = make_joint_limits(Scalar(-0.8), Scalar(-1.0),
                                                Scalar(-2.7));
  Vec12<Scalar> joint_upper = make_joint_limits(Scalar(0.8), Scalar(3.9),
                                                Scalar(-0.9));
  Vec12<Scalar> default_stance = make_default_stance();
  Scalar pd_kp = Scalar(25.0);
  Scalar pd_kd = Scalar(0.5);
  Scalar torque_limit = Scalar(33.5);   // N*m
  Scalar joint_viscosity = Scalar(4.0); // N*m*s/rad, first-order joint model
  Scalar foot_radius = Scalar(0.02);
  ContactParams<Scalar> foot_ground{Scalar(20000), Scalar(300), Scalar(0.8)};
  ContactParams<Scalar> foot_deck{Scalar(15000), Scalar(50), Scalar(1.0)};

  static Vec12<Scalar> make_joint_limits(Scalar hip, Scalar thigh, Scalar knee) {
    Vec12<Scalar> v;
    for (int leg = 0; leg < 4; ++leg) {
      v[3 * leg + 0] = hip;
      v[3 * leg + 1] = thigh;
      v[3 * leg + 2] = knee;
    }
    return v;
  }

  // Hip roll pulls the feet slightly inboard so the stance fits on the deck.
  static Vec12<Scalar> make_default_stance() {
    Vec12<Scalar> v;
    for (int leg = 0; leg < 4; ++leg) {
      const bool left = (leg % 2) == 0;
      v[3 * leg + 0] = left ? Scalar(-0.1) : Scalar(0.1);
      v[3 * leg + 1] = Scalar(0.8);
      v[3 * leg + 2] = Scalar(-1.5);
    }
    return v;
  }
};

template <typename Scalar>
struct QuadrupedState {
  RigidBodyState<Scalar> base;
  Vec12<Scalar> q = Vec12<Scalar>::Zero();
  Vec12<Scalar> qd = Vec12<Scalar>::Zero();
};

template <typename Scalar>
struct JointCommand {
  Vec12<Scalar> targets = Vec12<Scalar>::Zero();
};

using QuadrupedParamsd = QuadrupedParams<double>;
using QuadrupedStated = QuadrupedState<double>;
using JointCommandd = JointCommand<double>;

// Foot position of one leg in the trunk frame. The hip roll joint rotates
// about body x at the hip origin; hip pitch and knee rotate about the rolled
// y axis; thigh and calf extend along the rotated -z.
template <typename Scalar>
Vec3<Scalar> leg_forward_kinematics(const Eigen::Matrix<Scalar, 3, 1>& q_leg,
                                    const Vec3<Scalar>& hip_offset,
                                    const QuadrupedParams<Scalar>& params) {
  const Eigen::AngleAxis<Scalar> roll(q_leg[0], Vec3<Scalar>::UnitX());
  const Eigen::AngleAxis<Scalar> pitch(q_leg[1], Vec3<Scalar>::UnitY());
  const Eigen::AngleAxis<Scalar> knee(q_leg[2], Vec3<Scalar>::UnitY());
  const Vec3<Scalar> down(Scalar(0), Scalar(0), Scalar(-1));
  const Vec3<Scalar> knee_pos =
      hip_offset + roll * (pitch * (params.thigh_length * down));
  return knee_pos + roll * (pitch * (knee * (params.calf_length * down)));
}

// Body-frame Jacobian of one foot with respect to its three joints.
// Column i is axis_i x (p_foot - o_i) with everything in the trunk frame.
template <typename Scalar>
Mat3<Scalar> leg_jacobian(const Eigen::Matrix<Scalar, 3, 1>& q_leg,
                          const Vec3<Scalar>& hip_offset,
                          const QuadrupedParams<Scalar>& params) {
  const Eigen::AngleAxis<Scalar> roll(q_leg[0], Vec3<Scalar>::UnitX());
  const Eigen::AngleAxis<Scalar> pitch(q_leg[1], Vec3<Scalar>::UnitY());
  const Eigen::AngleAxis<Scalar> knee(q_leg[2], Vec3<Scalar>::UnitY());
  const Vec3<Scalar> down(Scalar(0), Scalar(0), Scalar(-1));
  const Vec3<Scalar> knee_pos =
      hip_offset + roll * (pitch * (params.thigh_length * down));
  const Vec3<Scalar> foot =
      knee_pos + roll * (pitch * (knee * (params.calf_length * down)));

  const Vec3<Scalar> roll_axis = Vec3<Scalar>::UnitX();
  const Vec3<Scalar> pitch_axis = roll * Vec3<Scalar>::UnitY();
  Mat3<Scalar> jacobian;
  jacobian.col(0) = roll_axis.cross(foot - hip_offset);
  jacobian.col(1) = pitch_axis.cross(foot - hip_offset);
  jacobian.col(2) = pitch_axis.cross(foot - knee_pos);
  return jacobian;
}

// World-frame foot positions, order FL, FR, RL, RR.
template <typename Scalar>
std::array<Vec3<Scalar>, 4> forward_kinematics(
    const Vec12<Scalar>& q, const RigidBodyState<Scalar>& base,
    const QuadrupedParams<Scalar>& params) {
  if (!q.allFinite()) {
    throw std::invalid_argument("forward_kinematics: non-finite q");
  }
  std::array<Vec3<Scalar>, 4> feet;
  for (int leg = 0; leg < 4; ++leg) {
    const Vec3<Scalar> body = leg_forward_kinematics<Scalar>(
        q.template segment<3>(3 * leg), params.hip_offsets[leg], params);
    feet[leg] = base.position + base.orientation * body;
  }
  return feet;
}

// PD position tracking with target clamping and symmetric torque saturation.
template <typename Scalar>
Vec12<Scalar> pd_joint_torques(const Vec12<Scalar>& q, const Vec12<Scalar>& qd,
                               const JointCommand<Scalar>& command,
                               const QuadrupedParams<Scalar>& params) {
  const Vec12<Scalar> targets = command.targets.cwiseMax(params.joint_lower)
                                    .cwiseMin(params.joint_upper);
  Vec12<Scalar> torques =
      params.pd_kp * (targets - q) - params.pd_kd * qd;
  return torques.cwiseMax(-params.torque_limit).cwiseMin(params.torque_limit);
}

// World gravity direction expressed in the trunk frame; unit norm.
template <typename Scalar>
inline Vec3<Scalar> project_gravity(const Quat<Scalar>& base_orientation) {
  return base_orientation.conjugate() *
         Vec3<Scalar>(Scalar(0), Scalar(0), Scalar(-1));
}

template <typename Scalar>
struct RobotStepResult {
  QuadrupedState<Scalar> state;
  std::vector<FootLoad<Scalar>> deck_loads;    // reactions applied to the deck
  std::array<bool, 4> deck_contact{};          // per-foot deck contact flag
  std::array<Vec3<Scalar>, 4> foot_positions;  // world, at force evaluation
  Vec12<Scalar> applied_torques = Vec12<Scalar>::Zero();
};

namespace detail {

// Splits a world force vector into a ContactForce along the given normal so
// that reconstruction via contact_force_world is exact up to sign-preserving
// arithmetic: used to hand the deck the exact negation of the foot force.
template <typename Scalar>
FootLoad<Scalar> make_reaction_load(const ContactForce<Scalar>& foot_force,
                                    const Vec3<Scalar>& normal,
                                    const Vec3<Scalar>& position) {
  // contact_tangent_basis(-n) = (-t1, t2) for the basis (t1, t2) of n, so the
  // reaction keeps a non-negative normal component and flips the tangential
  // coordinates accordingly.
  FootLoad<Scalar> load;
  load.normal = -normal;
  load.position = position;
  load.force.normal_force = foot_force.normal_force;
  load.force.tangential_force =
      Vec2<Scalar>(foot_force.tangential_force.x(),
                   -foot_force.tangential_force.y());
  return load;
}

}  // namespace detail

// Advances joints under PD torques with a first-order (viscous) joint model,
// evaluates foot contacts against the ground plane and the deck top surface,
// applies the contact forces to the trunk, and integrates the trunk. Deck
// reactions are returned for skateboard coupling; Newton's third law holds
// per contact exactly.
template <typename Scalar>
RobotStepResult<Scalar> step_robot(
    const QuadrupedState<Scalar>& state, const JointCommand<Scalar>& command,
    const QuadrupedParams<Scalar>& params, const SkateboardState<Scalar>& board,
    const SkateboardParams<Scalar>& board_params, const Vec3<Scalar>& gravity,
    const Vec3<Scalar>& external_force, const Vec3<Scalar>& external_torque,
    Scalar dt) {
  if (!state.q.allFinite() || !state.qd.allFinite()) {
    throw std::invalid_argument("step_robot: non-finite joint state");
  }
  if (!command.targets.allFinite()) {
    throw std::invalid_argument("step_robot: non-finite joint command");
  }

  RobotStepResult<Scalar> result;
  result.applied_torques = pd_joint_torques(state.q, state.qd, command, params);

  QuadrupedState<Scalar>& next = result.state;
  next.qd = result.applied_torques / params.joint_viscosity;
  next.q = state.q + dt * next.qd;
  for (int i = 0; i < 12; ++i) {
    if (next.q[i] < params.joint_lower[i]) {
      next.q[i] = params.joint_lower[i];
      next.qd[i] = Scalar(0);
    } else if (next.q[i] > params.joint_upper[i]) {
      next.q[i] = params.joint_upper[i];
      next.qd[i] = Scalar(0);
    }
  }

  const Mat3<Scalar> base_rotation = state.base.orientation.toRotationMatrix();
  const Vec3<Scalar> omega_world = base_rotation * state.base.angular_velocity;
  const Isometry3<Scalar> plate = deck_surface_frame(board);
  const Vec3<Scalar> plate_normal = plate.linear().col(2);

  Vec3<Scalar> force_world = params.trunk.mass * gravity + external_force;
  Vec3<Scalar> torque_body = external_torque;

  for (int leg = 0; leg < 4; ++leg) {
    const Eigen::Matrix<Scalar, 3, 1> q_leg = next.q.template segment<3>(3 * leg);
    const Vec3<Scalar> foot_body =
        leg_forward_kinematics<Scalar>(q_leg, params.hip_offsets[leg], params);
    const Vec3<Scalar> foot_world = state.base.position + base_rotation * foot_body;
    result.foot_positions[leg] = foot_world;

    const Mat3<Scalar> jacobian =
        leg_jacobian<Scalar>(q_leg, params.hip_offsets[leg], params);
    const Vec3<Scalar> foot_velocity =
        state.base.linear_velocity + omega_world.cross(base_rotation * foot_body) +
        base_rotation * (jacobian * next.qd.template segment<3>(3 * leg));

    // Ground plane contact.
    ContactPoint<Scalar> ground;
    ground.penetration = params.foot_radius - foot_world.z();
    if (ground.penetration > Scalar(0)) {
      ground.position = foot_world;
      ground.normal = Vec3<Scalar>::UnitZ();
      ground.relative_velocity = foot_velocity;
      const ContactForce<Scalar> resolved =
          compute_contact_force(ground, params.foot_ground);
      const Vec3<Scalar> f = contact_force_world(ground.normal, resolved);
      force_world += f;
      torque_body += (base_rotation.transpose() * (foot_world - state.base.position))
                         .cross(base_rotation.transpose() * f);
    }

    // Deck top-surface contact: point versus the deck rectangle, with a
    // lower window so a foot that has swung underneath the deck does not
    // snap to the top surface.
    const Vec3<Scalar> local = plate.inverse() * foot_world;
    const bool in_rectangle =
        std::abs(local.x()) <= board_params.deck_length / Scalar(2) &&
        std::abs(local.y()) <= board_params.deck_width / Scalar(2);
    if (in_rectangle && local.z() < params.foot_radius &&
        local.z() > Scalar(-0.5) * params.foot_radius) {
      ContactPoint<Scalar> deck;
      deck.penetration = params.foot_radius - local.z();
      deck.position = foot_world;
      deck.normal = plate_normal;
      deck.relative_velocity =
          foot_velocity - deck_surface_point_velocity(board, foot_world);
      const ContactForce<Scalar> resolved =
          compute_contact_force(deck, params.foot_deck);
      if (resolved.normal_force > Scalar(0)) {
        result.deck_contact[leg] = true;
        const Vec3<Scalar> f = contact_force_world(deck.normal, resolved);
        force_world += f;
        torque_body +=
            (base_rotation.transpose() * (foot_world - state.base.position))
                .cross(base_rotation.transpose() * f);
        result.deck_loads.push_back(
            detail::make_reaction_load(resolved, deck.normal, foot_world));
      }
    }
  }

  next.base = integrate_body(state.base, params.trunk, force_world, torque_body, dt);
  return result;
}

// Trunk height that puts the default-stance feet exactly at ground contact,
// less the static spring compression, so a spawned robot starts in balance.
template <typename Scalar>
Scalar standing_base_height(const QuadrupedParams<Scalar>& params,
                            Scalar gravity_magnitude, Scalar support_height) {
  Scalar lowest = Scalar(0);
  for (int leg = 0; leg < 4; ++leg) {
    const Vec3<Scalar> foot = leg_forward_kinematics<Scalar>(
        params.default_stance.template segment<3>(3 * leg),
        params.hip_offsets[leg], params);
    lowest = std::min(lowest, foot.z());
  }
  const Scalar static_penetration =
      params.trunk.mass * gravity_magnitude /
      (Scalar(4) * params.foot_ground.normal_stiffness);
  return support_height - lowest + params.foot_radius - static_penetration;
}

}  // namespace skatemount

#endif  // SKATEMOUNT_QUADRUPED_HPP_
