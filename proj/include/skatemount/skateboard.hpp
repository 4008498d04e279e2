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

#ifndef SKATEMOUNT_SKATEBOARD_HPP_
#define SKATEMOUNT_SKATEBOARD_HPP_

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "skatemount/dynamics.hpp"

namespace skatemount {

// The assembly is one rigid body (trucks, wheels, and deck lumped together)
// plus one internal bushing DoF: the deck plate tilts by roll_angle about the
// body's longitudinal axis. The body frame origin sits at the center of the
// deck's top surface, which is the z = 0 plane of the tilted plate frame.
template <typename Scalar>
struct SkateboardParams {
  Scalar mass = Scalar(2.1);                  // kg
  Mat3<Scalar> inertia =
      Vec3<Scalar>(Scalar(0.011), Scalar(0.058), Scalar(0.069)).asDiagonal();
  Scalar deck_length = Scalar(0.575);         // m, body x extent
  Scalar deck_width = Scalar(0.250);          // m, body y extent
  Scalar deck_height = Scalar(0.10);          // m, top surface above ground at rest
  Scalar wheelbase = Scalar(0.44);            // m, front-rear wheel separation
  Scalar track_width = Scalar(0.18);          // m, left-right wheel separation
  Scalar wheel_radius = Scalar(0.028);        // m
  Scalar bushing_stiffness = Scalar(2.0);     // N*m/rad, k_angular
  Scalar bushing_damping = Scalar(0.1);       // N*m*s/rad
  Scalar roll_inertia = Scalar(0.011);        // kg*m^2, plate about its long axis
  Scalar max_tilt = Scalar(0.35);             // rad, hard stop on roll_angle
  Scalar corner_radius = Scalar(0.015);       // m, deck corner contact sphere
  ContactParams<Scalar> wheel_contact{Scalar(15000), Scalar(50), Scalar(1.0)};
  ContactParams<Scalar> corner_contact{Scalar(15000), Scalar(50), Scalar(0.6)};
  bool tilt_when_fixed = false;  // fixed mode: let the plate tilt under load
};

template <typename Scalar>
struct SkateboardState {
  RigidBodyState<Scalar> deck;
  Scalar roll_angle = Scalar(0);   // rad, plate tilt relative to truck-neutral
  Scalar roll_rate = Scalar(0);    // rad/s
  Scalar steer_front = Scalar(0);  // rad
  Scalar steer_rear = Scalar(0);   // rad
  bool fixed = true;
};

// One foot force acting on the deck plate. The tangential components live in
// contact_tangent_basis(normal); position and normal are world frame.
template <typename Scalar>
struct FootLoad {
  ContactForce<Scalar> force;
  Vec3<Scalar> position = Vec3<Scalar>::Zero();
  Vec3<Scalar> normal = Vec3<Scalar>::UnitZ();
};

template <typename Scalar>
struct SkateboardStepDiagnostics {
  bool tilt_clamped = false;
};

using SkateboardParamsd = SkateboardParams<double>;
using SkateboardStated = SkateboardState<double>;
using FootLoadd = FootLoad<double>;

// Lean-to-steer map of a 45 degree kingpin: the front truck steers with the
// lean one-to-one, the rear truck mirrors it.
template <typename Scalar>
inline std::pair<Scalar, Scalar> truck_steering(Scalar roll_angle) {
  return {roll_angle, -roll_angle};
}

// Torsional spring-damper of the truck bushings.
template <typename Scalar>
inline Scalar bushing_torque(Scalar roll_angle, Scalar roll_rate,
                             const SkateboardParams<Scalar>& params) {
  return -params.bushing_stiffness * roll_angle -
         params.bushing_damping * roll_rate;
}

// Plate frame: body frame tilted by the bushing deflection about body x.
template <typename Scalar>
inline Quat<Scalar> deck_surface_orientation(const SkateboardState<Scalar>& state) {
  return state.deck.orientation *
         Quat<Scalar>(Eigen::AngleAxis<Scalar>(state.roll_angle,
                                               Vec3<Scalar>::UnitX()));
}

template <typename Scalar>
inline Isometry3<Scalar> deck_surface_frame(const SkateboardState<Scalar>& state) {
  Isometry3<Scalar> frame = Isometry3<Scalar>::Identity();
  frame.linear() = deck_surface_orientation(state).toRotationMatrix();
  frame.translation() = state.deck.position;
  return frame;
}

// Gravity direction in the plate frame; the board is flipped once the z
// component turns positive (top surface facing away from gravity).
template <typename Scalar>
inline std::pair<Scalar, bool> board_up_vector_flip(
    const SkateboardState<Scalar>& state, const Vec3<Scalar>& gravity) {
  const Vec3<Scalar> g_hat = gravity.normalized();
  const Scalar g_z =
      (deck_surface_orientation(state).conjugate() * g_hat).z();
  return {g_z, g_z > Scalar(0)};
}

// Wheel centers in the body frame; order FL, FR, RL, RR.
template <typename Scalar>
inline std::array<Vec3<Scalar>, 4> wheel_offsets(
    const SkateboardParams<Scalar>& params) {
  const Scalar x = params.wheelbase / Scalar(2);
  const Scalar y = params.track_width / Scalar(2);
  const Scalar z = -(params.deck_height - params.wheel_radius);
  return {Vec3<Scalar>(x, y, z), Vec3<Scalar>(x, -y, z),
          Vec3<Scalar>(-x, y, z), Vec3<Scalar>(-x, -y, z)};
}

// Deck top-surface corners in the plate frame; order FL, FR, RL, RR.
template <typename Scalar>
inline std::array<Vec3<Scalar>, 4> deck_corner_offsets(
    const SkateboardParams<Scalar>& params) {
  const Scalar x = params.deck_length / Scalar(2);
  const Scalar y = params.deck_width / Scalar(2);
  return {Vec3<Scalar>(x, y, Scalar(0)), Vec3<Scalar>(x, -y, Scalar(0)),
          Vec3<Scalar>(-x, y, Scalar(0)), Vec3<Scalar>(-x, -y, Scalar(0))};
}

// Equally spaced points on the top-surface perimeter in the plate frame,
// walked counterclockwise from the (-x, -y) corner. The count is the nominal
// spacing rounded onto the perimeter so the points stay uniform.
template <typename Scalar>
inline std::vector<Vec3<Scalar>> deck_edge_points(
    const SkateboardParams<Scalar>& params, Scalar nominal_spacing) {
  const Scalar length = params.deck_length;
  const Scalar width = params.deck_width;
  const Scalar perimeter = Scalar(2) * (length + width);
  const int count = std::max(4, static_cast<int>(std::floor(
                                    perimeter / nominal_spacing)));
  std::vector<Vec3<Scalar>> points;
  points.reserve(count);
  const Scalar half_l = length / Scalar(2);
  const Scalar half_w = width / Scalar(2);
  for (int i = 0; i < count; ++i) {
    Scalar s = Scalar(i) * perimeter / Scalar(count);
    Scalar x;
    Scalar y;
    if (s < length) {
      x = -half_l + s;
      y = -half_w;
    } else if (s < length + width) {
      x = half_l;
      y = -half_w + (s - length);
    } else if (s < Scalar(2) * length + width) {
      x = half_l - (s - length - width);
      y = half_w;
    } else {
      x = -half_l;
      y = half_w - (s - Scalar(2) * length - width);
    }
    points.emplace_back(x, y, Scalar(0));
  }
  return points;
}

// Board resting on its wheels at the given planar pose, wheel springs
// compressed to balance gravity so the state is a static equilibrium.
template <typename Scalar>
SkateboardState<Scalar> skateboard_rest_state(
    const SkateboardParams<Scalar>& params, const Vec2<Scalar>& position_xy,
    Scalar yaw, Scalar gravity_magnitude, bool fixed) {
  const Scalar static_penetration =
      params.mass * gravity_magnitude /
      (Scalar(4) * params.wheel_contact.normal_stiffness);
  SkateboardState<Scalar> state;
  state.deck.position = Vec3<Scalar>(position_xy.x(), position_xy.y(),
                                     params.deck_height - static_penetration);
  state.deck.orientation = Quat<Scalar>(
      Eigen::AngleAxis<Scalar>(yaw, Vec3<Scalar>::UnitZ()));
  state.fixed = fixed;
  return state;
}

namespace detail {

// Velocity of a body-frame point of the deck, world frame.
template <typename Scalar>
inline Vec3<Scalar> deck_point_velocity(const RigidBodyState<Scalar>& deck,
                                        const Vec3<Scalar>& point_world) {
  const Vec3<Scalar> omega_world = deck.orientation * deck.angular_velocity;
  return deck.linear_velocity + omega_world.cross(point_world - deck.position);
}

}  // namespace detail

// World velocity of a point rigidly attached to the deck plate.
template <typename Scalar>
inline Vec3<Scalar> deck_surface_point_velocity(
    const SkateboardState<Scalar>& state, const Vec3<Scalar>& point_world) {
  if (state.fixed) {
    return Vec3<Scalar>::Zero();
  }
  return detail::deck_point_velocity(state.deck, point_world);
}

// Advances the assembly by dt. Fixed mode leaves the pose untouched and, by
// default, freezes the bushing DoF; free mode applies foot loads, gravity,
// wheel contacts (lateral friction only, the rolling direction is force
// free), and deck-corner contacts for overturned poses, then integrates the
// bushing deflection driven by the foot roll moment.
template <typename Scalar>
SkateboardState<Scalar> step_skateboard(
    const SkateboardState<Scalar>& state,
    const std::vector<FootLoad<Scalar>>& foot_loads,
    const SkateboardParams<Scalar>& params, const Vec3<Scalar>& gravity,
    Scalar dt, SkateboardStepDiagnostics<Scalar>* diagnostics = nullptr) {
  Vec3<Scalar> force_world = Vec3<Scalar>::Zero();
  Vec3<Scalar> torque_body = Vec3<Scalar>::Zero();
  Scalar foot_roll_moment = Scalar(0);
  const Mat3<Scalar> rotation = state.deck.orientation.toRotationMatrix();

  for (const FootLoad<Scalar>& load : foot_loads) {
    const Vec3<Scalar> f = contact_force_world(load.normal, load.force);
    if (!f.allFinite() || !load.position.allFinite()) {
      throw std::invalid_argument("step_skateboard: non-finite foot load");
    }
    force_world += f;
    const Vec3<Scalar> arm_body =
        rotation.transpose() * (load.position - state.deck.position);
    const Vec3<Scalar> torque = arm_body.cross(rotation.transpose() * f);
    torque_body += torque;
    foot_roll_moment += torque.x();
  }

  SkateboardState<Scalar> next = state;

  if (!state.fixed) {
    force_world += params.mass * gravity;

    for (const Vec3<Scalar>& offset : wheel_offsets(params)) {
      const Vec3<Scalar> center = state.deck.position + rotation * offset;
      const Scalar penetration = params.wheel_radius - center.z();
      if (penetration <= Scalar(0)) {
        continue;
      }
      const Vec3<Scalar> point = center - params.wheel_radius * Vec3<Scalar>::UnitZ();
      const Vec3<Scalar> velocity = detail::deck_point_velocity(state.deck, point);
      const Scalar normal_force =
          std::max(Scalar(0),
                   params.wheel_contact.normal_stiffness * penetration -
                       params.wheel_contact.normal_damping * velocity.z());
      if (normal_force == Scalar(0)) {
        continue;
      }
      // Wheel heading: body x rotated by the truck steering angle about the
      // kingpin vertical, projected to the ground plane. Friction acts only
      // across the heading; rolling along it is free.
      const bool front = offset.x() > Scalar(0);
      const Scalar steer = front ? state.steer_front : state.steer_rear;
      Vec3<Scalar> heading =
          rotation * Vec3<Scalar>(std::cos(steer), std::sin(steer), Scalar(0));
      heading.z() = Scalar(0);
      Scalar heading_norm = heading.norm();
      if (heading_norm < Scalar(1e-9)) {
        heading = Vec3<Scalar>::UnitX();
        heading_norm = Scalar(1);
      }
      heading /= heading_norm;
      const Vec3<Scalar> lateral = Vec3<Scalar>::UnitZ().cross(heading);
      const Scalar lateral_speed = velocity.dot(lateral);
      Scalar lateral_force = -params.wheel_contact.normal_damping * lateral_speed;
      const Scalar cone = params.wheel_contact.friction_coefficient * normal_force;
      lateral_force = std::clamp(lateral_force, -cone, cone);

      const Vec3<Scalar> f =
          normal_force * Vec3<Scalar>::UnitZ() + lateral_force * lateral;
      force_world += f;
      torque_body += (rotation.transpose() * (point - state.deck.position))
                         .cross(rotation.transpose() * f);
    }

    const Quat<Scalar> plate = deck_surface_orientation(state);
    for (const Vec3<Scalar>& offset : deck_corner_offsets(params)) {
      const Vec3<Scalar> center = state.deck.position + plate * offset;
      ContactPoint<Scalar> contact;
      contact.penetration = params.corner_radius - center.z();
      if (contact.penetration <= Scalar(0)) {
        continue;
      }
      contact.position = center - params.corner_radius * Vec3<Scalar>::UnitZ();
      contact.normal = Vec3<Scalar>::UnitZ();
      contact.relative_velocity =
          detail::deck_point_velocity(state.deck, contact.position);
      const ContactForce<Scalar> resolved =
          compute_contact_force(contact, params.corner_contact);
      const Vec3<Scalar> f = contact_force_world(contact.normal, resolved);
      force_world += f;
      torque_body +=
          (rotation.transpose() * (contact.position - state.deck.position))
              .cross(rotation.transpose() * f);
    }

    InertialParams<Scalar> inertial{params.mass, params.inertia};
    next.deck = integrate_body(state.deck, inertial, force_world, torque_body, dt);
  }

  if (!state.fixed || params.tilt_when_fixed) {
    const Scalar roll_accel =
        (foot_roll_moment +
         bushing_torque(state.roll_angle, state.roll_rate, params)) /
        params.roll_inertia;
    next.roll_rate = state.roll_rate + dt * roll_accel;
    next.roll_angle = state.roll_angle + dt * next.roll_rate;
    if (std::abs(next.roll_angle) > params.max_tilt) {
      next.roll_angle = std::clamp(next.roll_angle, -params.max_tilt,
                                   params.max_tilt);
      next.roll_rate = Scalar(0);
      if (diagnostics != nullptr) {
        diagnostics->tilt_clamped = true;
      }
    }
  }

  std::tie(next.steer_front, next.steer_rear) = truck_steering(next.roll_angle);
  return next;
}

}  // namespace skatemount

#endif  // SKATEMOUNT_SKATEBOARD_HPP_
