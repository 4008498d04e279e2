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

#include "skatemount/rng.hpp"
#include "skatemount/skateboard.hpp"

namespace skatemount {
namespace {

constexpr double kGravity = 9.81;
const Vec3d kGravityVec(0.0, 0.0, -kGravity);

TEST_CASE("truck steering mirrors the lean front to rear") {
  Rng rng = Rng::derive(21, 0);
  for (int i = 0; i < 1000; ++i) {
    const double lean = rng.uniform(-0.35, 0.35);
    const auto [front, rear] = truck_steering(lean);
    CHECK(front == lean);
    CHECK(rear == -lean);
  }
}

TEST_CASE("bushing torque is a linear spring-damper") {
  SkateboardParamsd params;
  CHECK(bushing_torque(0.5, 0.0, params) == -1.0);
  CHECK(bushing_torque(0.0, 1.0, params) == -0.1);
  Rng rng = Rng::derive(22, 0);
  for (int i = 0; i < 1000; ++i) {
    const double angle = rng.uniform(-0.35, 0.35);
    const double rate = rng.uniform(-5.0, 5.0);
    const double expected = -params.bushing_stiffness * angle -
                            params.bushing_damping * rate;
    CHECK(bushing_torque(angle, rate, params) == expected);
  }
}

TEST_CASE("wheel and corner offsets sit at the four signed corners") {
  SkateboardParamsd params;
  const double x = params.wheelbase / 2.0;
  const double y = params.track_width / 2.0;
  const double z = -(params.deck_height - params.wheel_radius);
  const auto wheels = wheel_offsets(params);
  CHECK(wheels[0] == Vec3d(x, y, z));
  CHECK(wheels[1] == Vec3d(x, -y, z));
  CHECK(wheels[2] == Vec3d(-x, y, z));
  CHECK(wheels[3] == Vec3d(-x, -y, z));

  const auto corners = deck_corner_offsets(params);
  CHECK(corners[0] == Vec3d(0.2875, 0.125, 0.0));
  CHECK(corners[1] == Vec3d(0.2875, -0.125, 0.0));
  CHECK(corners[2] == Vec3d(-0.2875, 0.125, 0.0));
  CHECK(corners[3] == Vec3d(-0.2875, -0.125, 0.0));
}

TEST_CASE("edge points tile the deck perimeter counterclockwise") {
  SkateboardParamsd params;
  const auto points = deck_edge_points(params, 0.1);
  REQUIRE(points.size() == 16);

  const double half_l = params.deck_length / 2.0;
  const double half_w = params.deck_width / 2.0;
  CHECK(points[0].x() == -half_l);
  CHECK(points[0].y() == -half_w);

  double area2 = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    const Vec3d& a = points[i];
    const Vec3d& b = points[(i + 1) % points.size()];
    CHECK(a.z() == 0.0);
    CHECK(std::abs(a.x()) <= half_l + 1e-12);
    CHECK(std::abs(a.y()) <= half_w + 1e-12);
    // On the boundary: at least one coordinate pinned to an edge.
    const bool on_x_edge = std::abs(std::abs(a.x()) - half_l) < 1e-12;
    const bool on_y_edge = std::abs(std::abs(a.y()) - half_w) < 1e-12;
    CHECK((on_x_edge || on_y_edge));
    area2 += a.x() * b.y() - b.x() * a.y();
  }
  // Positive signed area means the walk is counterclockwise.
  CHECK(area2 > 0.0);
  // The 16-point polygon covers most of the deck rectangle.
  CHECK(area2 / 2.0 > 0.8 * params.deck_length * params.deck_width);
}

TEST_CASE("rest state balances gravity against the wheel springs") {
  SkateboardParamsd params;
  const SkateboardStated state =
      skateboard_rest_state(params, Vec2d(1.0, -2.0), 0.3, kGravity, false);
  const double penetration =
      params.mass * kGravity / (4.0 * params.wheel_contact.normal_stiffness);
  CHECK(state.deck.position.x() == 1.0);
  CHECK(state.deck.position.y() == -2.0);
  CHECK(state.deck.position.z() == params.deck_height - penetration);
  CHECK(state.roll_angle == 0.0);

  // Left free, the board barely moves off the constructed equilibrium.
  SkateboardStated rolled = state;
  for (int i = 0; i < 1000; ++i) {
    rolled = step_skateboard(rolled, {}, params, kGravityVec, 1.0 / 800.0);
  }
  CHECK(std::abs(rolled.deck.position.z() - state.deck.position.z()) < 1e-6);
  CHECK(rolled.deck.linear_velocity.norm() < 1e-6);
}

TEST_CASE("fixed mode leaves the pose bitwise untouched") {
  SkateboardParamsd params;
  SkateboardStated state;
  state.deck.position = Vec3d(0.4, -0.2, 0.11);
  state.deck.orientation =
      Quatd(Eigen::AngleAxisd(0.7, Vec3d(1, 2, 3).normalized()));
  state.deck.linear_velocity = Vec3d(0.1, 0.2, 0.3);
  state.deck.angular_velocity = Vec3d(-0.3, 0.1, 0.05);
  state.fixed = true;

  FootLoadd load;
  load.normal = Vec3d(0.0, 0.0, -1.0);
  load.force.normal_force = 30.0;
  load.force.tangential_force = Vec2d(2.0, -1.0);
  load.position = state.deck.position + Vec3d(0.1, 0.05, 0.0);

  const SkateboardStated next =
      step_skateboard(state, {load}, params, kGravityVec, 1.0 / 800.0);
  CHECK(next.deck.position.x() == state.deck.position.x());
  CHECK(next.deck.position.y() == state.deck.position.y());
  CHECK(next.deck.position.z() == state.deck.position.z());
  CHECK(next.deck.orientation.w() == state.deck.orientation.w());
  CHECK(next.deck.orientation.x() == state.deck.orientation.x());
  CHECK(next.deck.orientation.y() == state.deck.orientation.y());
  CHECK(next.deck.orientation.z() == state.deck.orientation.z());
  CHECK(next.deck.linear_velocity == state.deck.linear_velocity);
  CHECK(next.deck.angular_velocity == state.deck.angular_velocity);
  // Default fixed mode also freezes the bushing DoF.
  CHECK(next.roll_angle == 0.0);
  CHECK(next.roll_rate == 0.0);
  CHECK(next.steer_front == 0.0);
  CHECK(next.steer_rear == 0.0);
}

TEST_CASE("a foot moment tilts the plate to the spring equilibrium") {
  SkateboardParamsd params;
  params.tilt_when_fixed = true;
  SkateboardStated state =
      skateboard_rest_state(params, Vec2d(Vec2d::Zero()), 0.0, kGravity, true);

  // Downward force on the left rail: roll moment -0.4 N*m, equilibrium
  // deflection -0.4 / k = -0.2 rad.
  FootLoadd load;
  load.normal = Vec3d(0.0, 0.0, -1.0);
  load.force.normal_force = 4.0;
  load.position = state.deck.position + Vec3d(0.0, 0.1, 0.0);

  for (int i = 0; i < 4000; ++i) {
    state = step_skateboard(state, {load}, params, kGravityVec, 1.0 / 800.0);
  }
  CHECK(state.roll_angle == doctest::Approx(-0.2).epsilon(1e-3));
  CHECK(std::abs(state.roll_rate) < 1e-3);
  CHECK(state.steer_front == state.roll_angle);
  CHECK(state.steer_rear == -state.roll_angle);
}

TEST_CASE("the tilt hard stop clamps the angle and kills the rate") {
  SkateboardParamsd params;
  params.tilt_when_fixed = true;
  SkateboardStated state =
      skateboard_rest_state(params, Vec2d(Vec2d::Zero()), 0.0, kGravity, true);

  FootLoadd load;
  load.normal = Vec3d(0.0, 0.0, -1.0);
  load.force.normal_force = 40.0;  // moment -4 N*m, way past the stop
  load.position = state.deck.position + Vec3d(0.0, 0.1, 0.0);

  SkateboardStepDiagnostics<double> diag;
  bool clamped = false;
  for (int i = 0; i < 2000; ++i) {
    diag.tilt_clamped = false;
    state = step_skateboard(state, {load}, params, kGravityVec, 1.0 / 800.0,
                            &diag);
    clamped = clamped || diag.tilt_clamped;
    CHECK(std::abs(state.roll_angle) <= params.max_tilt);
  }
  CHECK(clamped);
  CHECK(state.roll_angle == -params.max_tilt);
  CHECK(state.roll_rate == 0.0);
}

TEST_CASE("a moving board rolls dead straight with neutral trucks") {
  SkateboardParamsd params;
  SkateboardStated state =
      skateboard_rest_state(params, Vec2d(Vec2d::Zero()), 0.0, kGravity, false);
  state.deck.linear_velocity = Vec3d(1.0, 0.0, 0.0);

  const double dt = 1.0 / 800.0;
  for (int i = 0; i < 500; ++i) {
    state = step_skateboard(state, {}, params, kGravityVec, dt);
  }
  // Rolling along the heading is force free, so forward speed is untouched
  // and no lateral or yaw motion appears at all. Pitch picks up roundoff
  // from the world-frame lever arms once x is nonzero, nothing more.
  CHECK(state.deck.linear_velocity.x() == 1.0);
  CHECK(state.deck.position.y() == 0.0);
  CHECK(state.deck.linear_velocity.y() == 0.0);
  CHECK(state.deck.orientation.x() == 0.0);
  CHECK(std::abs(state.deck.orientation.y()) < 1e-15);
  CHECK(state.deck.orientation.z() == 0.0);
  CHECK(state.deck.position.x() == doctest::Approx(500.0 * dt).epsilon(1e-9));
}

TEST_CASE("lateral sliding is damped while forward speed is preserved") {
  SkateboardParamsd params;
  SkateboardStated state =
      skateboard_rest_state(params, Vec2d(Vec2d::Zero()), 0.0, kGravity, false);
  state.deck.linear_velocity = Vec3d(0.0, 0.5, 0.0);

  for (int i = 0; i < 800; ++i) {
    state = step_skateboard(state, {}, params, kGravityVec, 1.0 / 800.0);
  }
  CHECK(std::abs(state.deck.linear_velocity.y()) < 0.02);
  CHECK(std::abs(state.deck.linear_velocity.x()) < 1e-12);
}

TEST_CASE("a steered board curves away from a straight line") {
  SkateboardParamsd params;
  params.tilt_when_fixed = true;
  SkateboardStated state =
      skateboard_rest_state(params, Vec2d(Vec2d::Zero()), 0.0, kGravity, false);
  state.deck.linear_velocity = Vec3d(1.0, 0.0, 0.0);
  state.roll_angle = 0.2;
  std::tie(state.steer_front, state.steer_rear) = truck_steering(state.roll_angle);

  // Pin the bushing at the lean: keep re-imposing the angle so the curve
  // radius stays constant while the pose integrates freely.
  for (int i = 0; i < 1600; ++i) {
    state = step_skateboard(state, {}, params, kGravityVec, 1.0 / 800.0);
    state.roll_angle = 0.2;
    state.roll_rate = 0.0;
    std::tie(state.steer_front, state.steer_rear) =
        truck_steering(state.roll_angle);
  }
  CHECK(std::abs(state.deck.position.y()) > 0.05);
  const double yaw = 2.0 * std::atan2(state.deck.orientation.z(),
                                      state.deck.orientation.w());
  CHECK(std::abs(yaw) > 0.05);
}

TEST_CASE("the flip indicator follows the plate up direction") {
  SkateboardParamsd params;
  SkateboardStated state =
      skateboard_rest_state(params, Vec2d(Vec2d::Zero()), 0.0, kGravity, false);

  auto [g_z_up, flipped_up] = board_up_vector_flip(state, kGravityVec);
  CHECK(g_z_up == doctest::Approx(-1.0));
  CHECK_FALSE(flipped_up);

  state.deck.orientation = Quatd(Eigen::AngleAxisd(M_PI, Vec3d::UnitX()));
  auto [g_z_down, flipped_down] = board_up_vector_flip(state, kGravityVec);
  CHECK(g_z_down == doctest::Approx(1.0));
  CHECK(flipped_down);

  // Exactly on its side is not yet flipped: the indicator is strict.
  state.deck.orientation = Quatd(Eigen::AngleAxisd(M_PI / 2.0, Vec3d::UnitX()));
  auto [g_z_side, flipped_side] = board_up_vector_flip(state, kGravityVec);
  CHECK(std::abs(g_z_side) < 1e-12);
  CHECK_FALSE(flipped_side);
}

TEST_CASE("an overturned board settles on its deck corners") {
  SkateboardParamsd params;
  SkateboardStated state;
  state.fixed = false;
  state.deck.orientation = Quatd(Eigen::AngleAxisd(M_PI, Vec3d::UnitX()));
  state.deck.position = Vec3d(0.0, 0.0, 0.05);

  for (int i = 0; i < 4000; ++i) {
    state = step_skateboard(state, {}, params, kGravityVec, 1.0 / 800.0);
  }
  // Still upside down, resting near the corner-sphere height, not sunk
  // through the floor and not bounced away.
  const auto [g_z, flipped] = board_up_vector_flip(state, kGravityVec);
  CHECK(flipped);
  CHECK(state.deck.position.z() > 0.0);
  CHECK(state.deck.position.z() < 0.05);
  CHECK(state.deck.linear_velocity.norm() < 0.05);
}

TEST_CASE("stepping rejects non-finite foot loads") {
  SkateboardParamsd params;
  SkateboardStated state =
      skateboard_rest_state(params, Vec2d(Vec2d::Zero()), 0.0, kGravity, false);
  FootLoadd load;
  load.force.normal_force = NAN;
  CHECK_THROWS_AS(
      step_skateboard(state, {load}, params, kGravityVec, 1.0 / 800.0),
      std::invalid_argument);
}

}  // namespace
}  // namespace skatemount
