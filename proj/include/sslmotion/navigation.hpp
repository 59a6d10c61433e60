// Copyright 2026 The sslmotion Authors
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

// Low-level movement primitives. Each turns the current state and a goal
// into one robot-frame velocity command per tick.

#ifndef SSLMOTION_NAVIGATION_HPP_
#define SSLMOTION_NAVIGATION_HPP_

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sslmotion/estimator.hpp"
#include "sslmotion/geometry.hpp"
#include "sslmotion/planner.hpp"
#include "sslmotion/world.hpp"

namespace sslm {

struct VelocityCommand {
  double vx = 0.0;  // robot frame
  double vy = 0.0;
  double omega = 0.0;
  bool kick = false;
  bool dribble = false;

  BodyTwist twist() const { return {vx, vy, omega}; }
  bool operator==(const VelocityCommand &) const = default;
};

enum class NavKind { kRotateOnSelf, kDriveToPoint, kRotateInPoint, kFollowTrajectory };

struct NavTarget {
  NavKind kind = NavKind::kFollowTrajectory;
  Vec2 point;                // DriveToPoint, FollowTrajectory
  double orientation = 0.0;  // all but RotateInPoint
  Vec2 pivot;                // RotateInPoint
  double radius = 0.0;       // RotateInPoint
  double tangential_speed = 0.0;  // RotateInPoint
};

struct NavGains {
  double k_omega = 4.0;   // 1/s
  double d_slow = 0.5;    // m
  double k_p = 2.0;       // 1/s
  double k_radial = 2.0;  // 1/s
};

namespace detail {

inline VelocityCommand fromWorld(const Vec2 &v_world, double omega, double heading,
                                 const MotionLimits &limits) {
  Vec2 v = v_world;
  const double speed = v.norm();
  if (speed > limits.v_max) v = v * (limits.v_max / speed);
  const Vec2 body = v.rotated(-heading);
  return {body.x, body.y, std::clamp(omega, -limits.omega_max, limits.omega_max)};
}

inline double headingRate(double heading, double target_heading, const MotionLimits &limits,
                          const NavGains &gains) {
  return std::clamp(gains.k_omega * wrapAngle(target_heading - heading), -limits.omega_max,
                    limits.omega_max);
}

}  // namespace detail

inline VelocityCommand rotateOnSelf(const RobotState &state, double target_heading,
                                    const MotionLimits &limits, const NavGains &gains = {}) {
  return {0.0, 0.0, detail::headingRate(state.heading, target_heading, limits, gains)};
}

/// Straight drive toward `target`. Speed is gated by cos(heading error)
/// (never negative) and ramps down linearly inside `d_slow`.
inline VelocityCommand driveToPoint(const RobotState &state, const Vec2 &target,
                                    double target_heading, const MotionLimits &limits,
                                    const NavGains &gains = {}) {
  const double error = wrapAngle(target_heading - state.heading);
  const Vec2 to_target = target - state.position;
  const double dist = to_target.norm();
  const double gate = std::max(0.0, std::cos(error));
  const double ramp = gains.d_slow > 0.0 ? std::min(1.0, dist / gains.d_slow) : 1.0;
  // cos(pi/2) is 6e-17, not 0.
  const double speed = gate < 1e-12 ? 0.0 : limits.v_max * gate * ramp;
  const Vec2 v_world = to_target.normalized() * speed;
  return detail::fromWorld(v_world, detail::headingRate(state.heading, target_heading, limits, gains),
                           state.heading, limits);
}

/// Orbit `pivot` at `radius`, facing it. Positive `tangential_speed` is
/// counter-clockwise. A radial term pulls the robot back onto the circle;
/// the yaw feedforward v_t / d keeps the pivot in front while orbiting.
inline VelocityCommand rotateInPoint(const RobotState &state, const Vec2 &pivot, double radius,
                                     double tangential_speed, const MotionLimits &limits,
                                     const NavGains &gains = {}) {
  if (!(radius > 0.0)) throw std::invalid_argument("rotateInPoint: radius must be > 0");
  const Vec2 offset = state.position - pivot;
  const double dist = offset.norm();
  if (dist < 1e-6) {
    return rotateOnSelf(state, state.heading, limits, gains);
  }
  const Vec2 radial = offset / dist;
  const Vec2 tangent = radial.perp();
  const Vec2 v_world = tangent * tangential_speed - radial * (gains.k_radial * (dist - radius));
  const double facing = (pivot - state.position).angle();
  const double omega = tangential_speed / dist +
                       gains.k_omega * wrapAngle(facing - state.heading);
  return detail::fromWorld(v_world, omega, state.heading, limits);
}

/// Trajectory tracking: sampled velocity as feedforward plus a
/// proportional pull toward the sampled position. `lookahead` is the
/// control period; the feedforward is the velocity the plan wants at the
/// end of it, so an acceleration-limited plant can follow the plan exactly.
/// Past the end it holds the final target.
inline VelocityCommand followTrajectory(const RobotState &state, const PlanResult &plan,
                                        double t_since_plan, double target_heading,
                                        const MotionLimits &limits, const NavGains &gains = {},
                                        double lookahead = 0.0) {
  Vec2 reference;
  Vec2 feedforward;
  if (t_since_plan >= plan.trajectory.totalTime()) {
    reference = plan.trajectory.target();
  } else {
    reference = plan.trajectory.sample(t_since_plan).position;
    feedforward = plan.trajectory.sample(t_since_plan + lookahead).velocity;
  }
  const Vec2 v_world = feedforward + (reference - state.position) * gains.k_p;
  return detail::fromWorld(v_world, detail::headingRate(state.heading, target_heading, limits, gains),
                           state.heading, limits);
}

/// Keeps one control period's change within the acceleration limits,
/// measured from the current (estimated) world velocity and yaw rate. A
/// plant that honours the same limits then executes the command as sent,
/// so the command log stays a faithful record of the motion.
inline VelocityCommand limitAcceleration(const VelocityCommand &cmd, const RobotState &state,
                                         const MotionLimits &limits, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("limitAcceleration: dt must be > 0");
  const Vec2 desired = Vec2{cmd.vx, cmd.vy}.rotated(state.heading);
  Vec2 dv = desired - state.velocity;
  const double max_dv = limits.a_max * dt;
  if (dv.norm() > max_dv) dv = dv * (max_dv / dv.norm());
  const double max_dw = limits.alpha_max * dt;
  const double omega =
      state.angular_velocity + std::clamp(cmd.omega - state.angular_velocity, -max_dw, max_dw);
  VelocityCommand out = detail::fromWorld(state.velocity + dv, omega, state.heading, limits);
  out.kick = cmd.kick;
  out.dribble = cmd.dribble;
  return out;
}

}  // namespace sslm

#endif  // SSLMOTION_NAVIGATION_HPP_
