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

#ifndef SKATEMOUNT_DYNAMICS_HPP_
#define SKATEMOUNT_DYNAMICS_HPP_

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <stdexcept>
#include <string>

namespace skatemount {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Quat = Eigen::Quaternion<Scalar>;
template <typename Scalar>
using Isometry3 = Eigen::Transform<Scalar, 3, Eigen::Isometry>;

using Vec2d = Vec2<double>;
using Vec3d = Vec3<double>;
using Mat3d = Mat3<double>;
using Quatd = Quat<double>;
using Isometry3d = Isometry3<double>;

// Pose and twist of a free body. The orientation maps body to world;
// angular velocity is expressed in the body frame.
template <typename Scalar>
struct RigidBodyState {
  Vec3<Scalar> position = Vec3<Scalar>::Zero();
  Quat<Scalar> orientation = Quat<Scalar>::Identity();
  Vec3<Scalar> linear_velocity = Vec3<Scalar>::Zero();
  Vec3<Scalar> angular_velocity = Vec3<Scalar>::Zero();
};

template <typename Scalar>
struct InertialParams {
  Scalar mass = Scalar(1);
  Mat3<Scalar> inertia = Mat3<Scalar>::Identity();  // body frame, kg*m^2
};

template <typename Scalar>
struct ContactPoint {
  Vec3<Scalar> position = Vec3<Scalar>::Zero();
  Vec3<Scalar> normal = Vec3<Scalar>::UnitZ();
  Scalar penetration = Scalar(0);  // >= 0 when in contact
  Vec3<Scalar> relative_velocity = Vec3<Scalar>::Zero();
};

// Resolved contact force: scalar along the surface normal plus a 2-vector in
// the tangent plane spanned by contact_tangent_basis(normal).
template <typename Scalar>
struct ContactForce {
  Scalar normal_force = Scalar(0);
  Vec2<Scalar> tangential_force = Vec2<Scalar>::Zero();
};

template <typename Scalar>
struct ContactParams {
  Scalar normal_stiffness = Scalar(20000);  // N/m
  Scalar normal_damping = Scalar(500);      // N*s/m, also resists tangential slip
  Scalar friction_coefficient = Scalar(0.8);
};

using RigidBodyStated = RigidBodyState<double>;
using InertialParamsd = InertialParams<double>;
using ContactPointd = ContactPoint<double>;
using ContactForced = ContactForce<double>;
using ContactParamsd = ContactParams<double>;

namespace detail {

template <typename Scalar>
inline void require_finite(const Vec3<Scalar>& v, const char* field,
                           const char* op) {
  if (!v.allFinite()) {
    throw std::invalid_argument(std::string(op) + ": non-finite " + field);
  }
}

template <typename Scalar>
inline void require_finite(const Quat<Scalar>& q, const char* field,
                           const char* op) {
  if (!q.coeffs().allFinite()) {
    throw std::invalid_argument(std::string(op) + ": non-finite " + field);
  }
}

}  // namespace detail

// Deterministic orthonormal basis of the tangent plane for a unit normal.
template <typename Scalar>
inline std::pair<Vec3<Scalar>, Vec3<Scalar>> contact_tangent_basis(
    const Vec3<Scalar>& normal) {
  const Vec3<Scalar> ref = std::abs(normal.z()) < Scalar(0.9)
                               ? Vec3<Scalar>::UnitZ()
                               : Vec3<Scalar>::UnitX();
  Vec3<Scalar> t1 = ref.cross(normal).normalized();
  Vec3<Scalar> t2 = normal.cross(t1);
  return {t1, t2};
}

// Unit quaternion from a rotation vector (exact exponential map).
template <typename Scalar>
inline Quat<Scalar> quat_exp(const Vec3<Scalar>& rotation_vector) {
  const Scalar angle = rotation_vector.norm();
  if (angle < Scalar(1e-12)) {
    Quat<Scalar> q(Scalar(1), rotation_vector.x() / Scalar(2),
                   rotation_vector.y() / Scalar(2),
                   rotation_vector.z() / Scalar(2));
    q.normalize();
    return q;
  }
  const Vec3<Scalar> axis = rotation_vector / angle;
  return Quat<Scalar>(Eigen::AngleAxis<Scalar>(angle, axis));
}

// One semi-implicit Euler step of the free rigid-body equations. Velocities
// are updated first, then the pose from the new velocities. The linear
// update is done in the world frame where the convective term vanishes, so
// zero external force conserves linear momentum exactly; the angular update
// keeps the gyroscopic term in the body frame.
template <typename Scalar>
RigidBodyState<Scalar> integrate_body(const RigidBodyState<Scalar>& state,
                                      const InertialParams<Scalar>& inertial,
                                      const Vec3<Scalar>& force_world,
                                      const Vec3<Scalar>& torque_body,
                                      Scalar dt) {
  detail::require_finite(state.position, "state.position", "integrate_body");
  detail::require_finite(state.orientation, "state.orientation",
                         "integrate_body");
  detail::require_finite(state.linear_velocity, "state.linear_velocity",
                         "integrate_body");
  detail::require_finite(state.angular_velocity, "state.angular_velocity",
                         "integrate_body");
  detail::require_finite(force_world, "force", "integrate_body");
  detail::require_finite(torque_body, "torque", "integrate_body");
  if (!(dt > Scalar(0)) || !std::isfinite(static_cast<double>(dt))) {
    throw std::invalid_argument("integrate_body: non-positive dt");
  }
  if (!(inertial.mass > Scalar(0))) {
    throw std::invalid_argument("integrate_body: non-positive mass");
  }

  RigidBodyState<Scalar> next;
  next.linear_velocity = state.linear_velocity + dt * force_world / inertial.mass;

  const Vec3<Scalar>& w = state.angular_velocity;
  const Vec3<Scalar> gyro = w.cross(inertial.inertia * w);
  const Vec3<Scalar> angular_accel =
      inertial.inertia.ldlt().solve(torque_body - gyro);
  next.angular_velocity = w + dt * angular_accel;

  next.position = state.position + dt * next.linear_velocity;
  next.orientation =
      state.orientation * quat_exp<Scalar>(dt * next.angular_velocity);
  next.orientation.normalize();
  return next;
}

// Spring-damper normal force with a Coulomb cone on the tangential force.
// The tangential demand is viscous (normal_damping times the slip velocity)
// and is clamped to mu times the normal force, so every returned force
// satisfies |f_t| <= mu * f_n.
template <typename Scalar>
ContactForce<Scalar> compute_contact_force(const ContactPoint<Scalar>& contact,
                                           const ContactParams<Scalar>& params) {
  ContactForce<Scalar> force;
  if (contact.penetration < Scalar(0)) {
    return force;
  }
  const Scalar separating_rate = contact.normal.dot(contact.relative_velocity);
  force.normal_force =
      std::max(Scalar(0), params.normal_stiffness * contact.penetration -
                              params.normal_damping * separating_rate);
  if (force.normal_force == Scalar(0)) {
    return force;
  }

  const Vec3<Scalar> tangential_velocity =
      contact.relative_velocity - separating_rate * contact.normal;
  const auto [t1, t2] = contact_tangent_basis(contact.normal);
  Vec2<Scalar> demand(-params.normal_damping * tangential_velocity.dot(t1),
                      -params.normal_damping * tangential_velocity.dot(t2));
  const Scalar demand_norm = demand.norm();
  const Scalar cone_limit = params.friction_coefficient * force.normal_force;
  force.tangential_force =
      demand_norm > cone_limit ? Vec2<Scalar>(demand * (cone_limit / demand_norm))
                               : demand;
  return force;
}

// World-frame force vector of a resolved contact.
template <typename Scalar>
inline Vec3<Scalar> contact_force_world(const Vec3<Scalar>& normal,
                                        const ContactForce<Scalar>& force) {
  const auto [t1, t2] = contact_tangent_basis(normal);
  return force.normal_force * normal + force.tangential_force.x() * t1 +
         force.tangential_force.y() * t2;
}

}  // namespace skatemount

#endif  // SKATEMOUNT_DYNAMICS_HPP_
