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

#ifndef SSLMOTION_ESTIMATOR_HPP_
#define SSLMOTION_ESTIMATOR_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sslmotion/geometry.hpp"
#include "sslmotion/world.hpp"

namespace sslm {

/// Velocity in the robot frame: x forward, y left.
struct BodyTwist {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;

  bool operator==(const BodyTwist &) const = default;
};

struct CommandLogEntry {
  double t_sent = 0.0;
  BodyTwist twist;

  bool operator==(const CommandLogEntry &) const = default;
};

/// Bounded, time-ordered log of sent commands. The oldest entries are
/// dropped once `capacity` is reached.
class CommandLog {
 public:
  explicit CommandLog(std::size_t capacity = 512) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("CommandLog: capacity must be > 0");
    entries_.reserve(capacity);
  }

  void push(const CommandLogEntry &e) {
    if (!std::isfinite(e.t_sent) || !std::isfinite(e.twist.vx) || !std::isfinite(e.twist.vy) ||
        !std::isfinite(e.twist.omega)) {
      throw std::invalid_argument("CommandLog: non-finite entry");
    }
    if (size_ > 0 && e.t_sent < back().t_sent) {
      throw std::invalid_argument("CommandLog: entries must be pushed in time order");
    }
    if (entries_.size() < capacity_) {
      entries_.push_back(e);
    } else {
      entries_[head_] = e;
      head_ = (head_ + 1) % capacity_;
    }
    size_ = entries_.size();
  }
  void push(double t_sent, const BodyTwist &twist) { push({t_sent, twist}); }

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return size_ == 0; }
  const CommandLogEntry &at(std::size_t i) const { return entries_[(head_ + i) % entries_.size()]; }
  const CommandLogEntry &back() const { return at(size_ - 1); }

  /// Ordered copy of the entries that can matter from `since` on: the one
  /// active at `since` and everything after it.
  std::vector<CommandLogEntry> snapshot(double since = -1e300) const {
    std::vector<CommandLogEntry> out;
    std::size_t first = 0;
    for (std::size_t i = 0; i < size_; ++i) {
      if (at(i).t_sent <= since) first = i;
    }
    out.reserve(size_ - first);
    for (std::size_t i = first; i < size_; ++i) out.push_back(at(i));
    return out;
  }

 private:
  std::size_t capacity_;
  std::vector<CommandLogEntry> entries_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

/// Line-oriented text: `t_sent vx vy omega`, `#` starts a comment.
inline void dumpCommandLog(std::ostream &os, std::span<const CommandLogEntry> entries) {
  os << std::setprecision(17);
  for (const auto &e : entries) {
    os << e.t_sent << ' ' << e.twist.vx << ' ' << e.twist.vy << ' ' << e.twist.omega << '\n';
  }
}

inline std::vector<CommandLogEntry> loadCommandLog(std::istream &is) {
  std::vector<CommandLogEntry> out;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    CommandLogEntry e;
    std::string extra;
    if (!(ls >> e.t_sent >> e.twist.vx >> e.twist.vy >> e.twist.omega) || (ls >> extra)) {
      throw std::runtime_error("command log line " + std::to_string(line_no) +
                               ": expected `t_sent vx vy omega`");
    }
    if (!out.empty() && e.t_sent < out.back().t_sent) {
      throw std::runtime_error("command log line " + std::to_string(line_no) +
                               ": timestamps must be non-decreasing");
    }
    out.push_back(e);
  }
  return out;
}

struct VisionFrame {
  double t_capture = 0.0;
  Vec2 position;
  double heading = 0.0;
  std::optional<Vec2> velocity;
};

struct Pose2 {
  Vec2 position;
  double heading = 0.0;  // not wrapped
};

/// Exact pose after holding a body twist for `dt`. The displacement is the
/// body velocity rotated to the mid-arc heading and scaled by
/// 2 sin(w dt / 2) / w, which tends to dt as w -> 0.
inline Pose2 integrateTwist(const Pose2 &pose, const BodyTwist &twist, double dt) {
  const double half = 0.5 * twist.omega * dt;
  const double scale = twist.omega == 0.0 ? dt : 2.0 * std::sin(half) / twist.omega;
  const double mid = pose.heading + half;
  const Vec2 step = Vec2{twist.vx, twist.vy}.rotated(mid) * scale;
  return {pose.position + step, pose.heading + twist.omega * dt};
}

/// Current state from a stale frame: starting at the captured pose, replay
/// every logged command over its active interval clipped to
/// [t_capture, now]. Commands are held constant until the next entry.
/// Stretches not covered by any command are extrapolated with the frame's
/// own velocity (zero when absent).
inline RobotState predictCurrentState(const VisionFrame &frame,
                                      std::span<const CommandLogEntry> log, double now) {
  if (!(now >= frame.t_capture)) {
    throw std::invalid_argument("predictCurrentState: now precedes the frame capture");
  }
  const Vec2 frame_velocity = frame.velocity.value_or(Vec2{});
  RobotState out;
  out.position = frame.position;
  out.heading = wrapAngle(frame.heading);
  out.velocity = frame_velocity;
  if (now == frame.t_capture) return out;

  Pose2 pose{frame.position, frame.heading};
  double t = frame.t_capture;
  const BodyTwist *active = nullptr;
  for (std::size_t i = 0; i < log.size() && t < now; ++i) {
    const double begin = log[i].t_sent;
    const double end = i + 1 < log.size() ? log[i + 1].t_sent : now;
    if (end <= t) continue;
    if (begin > t) {
      // Gap before the first logged command.
      const double gap = std::min(begin, now) - t;
      pose.position += frame_velocity * gap;
      t += gap;
      if (t >= now) break;
    }
    const double until = std::min(end, now);
    pose = integrateTwist(pose, log[i].twist, until - t);
    t = until;
    active = &log[i].twist;
  }
  if (t < now) pose.position += frame_velocity * (now - t);

  out.position = pose.position;
  out.heading = wrapAngle(pose.heading);
  if (active != nullptr) {
    out.velocity = Vec2{active->vx, active->vy}.rotated(pose.heading);
    out.angular_velocity = active->omega;
  }
  return out;
}

/// Omni-wheel layout. Wheel i sits at `wheel_angles[i]` around the robot
/// center (CCW from forward) at distance `robot_radius`; it drives along the
/// tangent of that circle. `gear_ratio` converts motor speed into wheel
/// speed (18:60 spur stage -> 0.3).
struct WheelConfig {
  std::array<double, 4> wheel_angles = {kPi / 6.0, 3.0 * kPi / 4.0, -3.0 * kPi / 4.0,
                                        -kPi / 6.0};
  double wheel_radius = 0.027;
  double robot_radius = 0.081;
  double gear_ratio = 18.0 / 60.0;
};

/// Forward/inverse kinematics of a four-wheel omni base.
class WheelKinematics {
 public:
  using Jacobian = Eigen::Matrix<double, 4, 3>;

  explicit WheelKinematics(const WheelConfig &cfg = {}) : cfg_(cfg) {
    if (!(cfg.wheel_radius > 0.0) || !(cfg.robot_radius > 0.0) || !(cfg.gear_ratio > 0.0)) {
      throw std::invalid_argument("WheelConfig: radii and gear ratio must be > 0");
    }
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) {
        if (std::abs(wrapAngle(cfg.wheel_angles[i] - cfg.wheel_angles[j])) < 1e-9) {
          throw std::invalid_argument("WheelConfig: wheel angles must be distinct");
        }
      }
    }
    for (int i = 0; i < 4; ++i) {
      const double phi = cfg.wheel_angles[static_cast<std::size_t>(i)];
      jacobian_.row(i) << -std::sin(phi), std::cos(phi), cfg.robot_radius;
    }
    const auto decomposition = jacobian_.completeOrthogonalDecomposition();
    if (decomposition.rank() != 3) {
      throw std::invalid_argument("WheelConfig: wheel Jacobian is rank deficient");
    }
    pseudo_inverse_ = decomposition.pseudoInverse();
  }

  const WheelConfig &config() const { return cfg_; }
  const Jacobian &jacobian() const { return jacobian_; }

  /// Motor speeds (rad/s) that realize `twist`.
  std::array<double, 4> wheelSpeeds(const BodyTwist &twist) const {
    const Eigen::Vector4d rim = jacobian_ * Eigen::Vector3d(twist.vx, twist.vy, twist.omega);
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i) out[static_cast<std::size_t>(i)] = rim[i] / rimPerMotor();
    return out;
  }

  /// Least-squares body twist from motor speeds (rad/s).
  BodyTwist twist(const std::array<double, 4> &motor_speeds) const {
    Eigen::Vector4d rim;
    for (int i = 0; i < 4; ++i) rim[i] = motor_speeds[static_cast<std::size_t>(i)] * rimPerMotor();
    const Eigen::Vector3d t = pseudo_inverse_ * rim;
    return {t[0], t[1], t[2]};
  }

 private:
  double rimPerMotor() const { return cfg_.wheel_radius * cfg_.gear_ratio; }

  WheelConfig cfg_;
  Jacobian jacobian_;
  Eigen::Matrix<double, 3, 4> pseudo_inverse_;
};

/// Dead-reckoning step: encoder twist through the pseudo-inverse, yaw rate
/// taken from the gyro, pose advanced along the exact arc over `dt`.
inline RobotState odometryStep(const RobotState &prev, const std::array<double, 4> &motor_speeds,
                               double gyro_omega, double dt, const WheelKinematics &kin) {
  if (!(dt > 0.0)) throw std::invalid_argument("odometryStep: dt must be > 0");
  BodyTwist body = kin.twist(motor_speeds);
  body.omega = gyro_omega;
  const Pose2 next = integrateTwist({prev.position, prev.heading}, body, dt);
  RobotState out;
  out.position = next.position;
  out.heading = wrapAngle(next.heading);
  out.velocity = Vec2{body.vx, body.vy}.rotated(next.heading);
  out.angular_velocity = gyro_omega;
  return out;
}

/// Convex blend at frame arrival: trust=1 keeps the vision-predicted state,
/// trust=0 keeps odometry. Headings blend along the shorter arc.
inline RobotState fuseOnVision(const RobotState &predicted, const RobotState &odom, double trust) {
  if (!(trust >= 0.0 && trust <= 1.0)) {
    throw std::invalid_argument("fuseOnVision: trust must lie in [0, 1]");
  }
  if (trust == 1.0) return predicted;
  if (trust == 0.0) return odom;
  RobotState out;
  out.position = odom.position * (1.0 - trust) + predicted.position * trust;
  out.velocity = odom.velocity * (1.0 - trust) + predicted.velocity * trust;
  out.heading = wrapAngle(odom.heading + trust * wrapAngle(predicted.heading - odom.heading));
  out.angular_velocity = (1.0 - trust) * odom.angular_velocity + trust * predicted.angular_velocity;
  return out;
}

inline RobotState fuseOnVision(const VisionFrame &frame, std::span<const CommandLogEntry> log,
                               double now, const RobotState &odom, double trust) {
  return fuseOnVision(predictCurrentState(frame, log, now), odom, trust);
}

}  // namespace sslm

#endif  // SSLMOTION_ESTIMATOR_HPP_
