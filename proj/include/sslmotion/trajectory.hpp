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

// Time-optimal bang-bang motion profiles.
//
// A 1D profile drives a double integrator with |a| <= a_max and
// |v| <= v_max from (x0, v0) to rest at a target in minimum time. Its
// phases are: brake to rest if the current motion overshoots or points
// away from the target, accelerate toward the target, cruise at v_max when
// it is reached, decelerate to rest. Every phase has constant acceleration,
// so a profile is at most four segments and sampling is closed form.
//
// A 2D trajectory runs one profile per axis. The planar limits are split
// between the axes by an angle alpha (x gets cos(alpha), y gets sin(alpha))
// and alpha is bisected until both axes finish together, which keeps the
// planar speed and acceleration within the original limits.

#ifndef SSLMOTION_TRAJECTORY_HPP_
#define SSLMOTION_TRAJECTORY_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>

#include "sslmotion/geometry.hpp"
#include "sslmotion/world.hpp"

namespace sslm {

/// Constant-acceleration piece of a profile. `t_end` is relative to the
/// profile start; the piece begins where the previous one ends (or at 0).
struct Segment1D {
  double t_end = 0.0;
  double x0 = 0.0;
  double v0 = 0.0;
  double a = 0.0;
};

struct Sample1D {
  double position = 0.0;
  double velocity = 0.0;
  double acceleration = 0.0;
};

class Profile1D {
 public:
  static constexpr std::size_t kMaxSegments = 4;

  Profile1D() = default;
  /// Empty profile resting at `x`.
  explicit Profile1D(double x) : start_(x), target_(x) {}

  /// Single full-deceleration segment bringing `v0` to rest at `rate`.
  static Profile1D braking(double x0, double v0, double rate) {
    Profile1D p(x0);
    if (v0 == 0.0) return p;
    if (!(rate > 0.0)) {
      throw std::invalid_argument("Profile1D::braking: rate must be > 0 for a moving axis");
    }
    const double duration = std::abs(v0) / rate;
    const double a = v0 > 0.0 ? -rate : rate;
    p.segments_[0] = {duration, x0, v0, a};
    p.count_ = 1;
    p.total_time_ = duration;
    p.target_ = x0 + 0.5 * v0 * duration;
    return p;
  }

  std::span<const Segment1D> segments() const { return {segments_.data(), count_}; }
  double totalTime() const { return total_time_; }
  double target() const { return target_; }
  double startPosition() const { return start_; }
  bool empty() const { return count_ == 0; }

  /// Closed-form state at `t`. Before 0 the initial state is returned;
  /// from `totalTime()` on the profile rests at the target.
  Sample1D sample(double t) const {
    if (count_ == 0 || t >= total_time_) {
      return {target_, 0.0, 0.0};
    }
    t = std::max(t, 0.0);
    double t_begin = 0.0;
    for (std::size_t i = 0; i < count_; ++i) {
      const Segment1D &s = segments_[i];
      if (t < s.t_end || i + 1 == count_) {
        const double tau = t - t_begin;
        return {s.x0 + s.v0 * tau + 0.5 * s.a * tau * tau, s.v0 + s.a * tau, s.a};
      }
      t_begin = s.t_end;
    }
    return {target_, 0.0, 0.0};  // unreachable
  }

 private:
  friend Profile1D planBangBang1D(double, double, double, double, double);

  std::array<Segment1D, kMaxSegments> segments_{};
  std::size_t count_ = 0;
  double total_time_ = 0.0;
  double start_ = 0.0;
  double target_ = 0.0;
};

/// Time-optimal rest-terminated profile from (x0, v0) to `target`.
///
/// An initial speed above `v_max` is brought down at full deceleration;
/// the profile is then feasible from that point on.
inline Profile1D planBangBang1D(double x0, double v0, double target, double v_max,
                                double a_max) {
  if (!std::isfinite(x0) || !std::isfinite(v0) || !std::isfinite(target) ||
      !std::isfinite(v_max) || !std::isfinite(a_max)) {
    throw std::invalid_argument("planBangBang1D: non-finite input");
  }
  if (!(v_max > 0.0) || !(a_max > 0.0)) {
    throw std::invalid_argument("planBangBang1D: v_max and a_max must be > 0");
  }

  Profile1D p(x0);
  p.target_ = target;
  if (x0 == target && v0 == 0.0) {
    return p;
  }

  double x = x0;
  double v = v0;
  double t = 0.0;
  auto push = [&](double duration, double a) {
    if (!(duration > 0.0)) return;
    // A phase shorter than one ulp of t still moves the state but gets no
    // segment of its own.
    if (t + duration > t) p.segments_[p.count_++] = {t + duration, x, v, a};
    x += v * duration + 0.5 * a * duration * duration;
    v += a * duration;
    t += duration;
  };
  auto sign = [](double s) { return (s > 0.0) - (s < 0.0); };

  // Overshooting or receding: come to rest first, the remainder is then a
  // rest-to-rest move back.
  const double d = target - x;
  const double stop_distance = v * std::abs(v) / (2.0 * a_max);
  if (v != 0.0 && (sign(v) != sign(d) || std::abs(stop_distance) > std::abs(d))) {
    push(std::abs(v) / a_max, -sign(v) * a_max);
    v = 0.0;
  }

  const double remaining = target - x;
  const int dir = sign(remaining);
  if (dir != 0) {
    const double dist = std::abs(remaining);
    const double speed = v * dir;  // >= 0 here
    double peak;
    if (speed > v_max) {
      peak = v_max;
      push((speed - v_max) / a_max, -dir * a_max);
      v = dir * v_max;
    } else {
      peak = std::min(v_max, std::sqrt(a_max * dist + 0.5 * speed * speed));
      push((peak - speed) / a_max, dir * a_max);
    }
    const double braking = peak * peak / (2.0 * a_max);
    const double cruise = std::abs(target - x) - braking;
    if (cruise > 0.0) {
      push(cruise / std::abs(v), 0.0);
    }
    push(std::abs(v) / a_max, -dir * a_max);
  }
  p.total_time_ = t;
  return p;
}

struct Sample2D {
  Vec2 position;
  Vec2 velocity;
  Vec2 acceleration;
};

/// Pair of axis profiles that finish (nearly) together.
struct Trajectory2D {
  Profile1D x;
  Profile1D y;
  double alpha = 0.0;
  double total_time = 0.0;

  Sample2D sample(double t) const {
    const Sample1D sx = x.sample(t);
    const Sample1D sy = y.sample(t);
    return {{sx.position, sy.position},
            {sx.velocity, sy.velocity},
            {sx.acceleration, sy.acceleration}};
  }
  Vec2 start() const { return {x.startPosition(), y.startPosition()}; }
  Vec2 target() const { return {x.target(), y.target()}; }
};

struct SyncConfig {
  int max_iterations = 40;
  double tolerance = 1e-3;  // seconds
};

/// Synchronized planar trajectory from `start` to rest at `target`.
///
/// Bisection on alpha: the x-axis time grows with alpha and the y-axis
/// time shrinks, so the sign of (Tx - Ty) brackets the crossing.
inline Trajectory2D planSynchronized2D(const RobotState &start, const Vec2 &target,
                                       const MotionLimits &limits, const SyncConfig &cfg = {}) {
  limits.validate();
  const Vec2 &p = start.position;
  const Vec2 &v = start.velocity;
  const bool x_done = p.x == target.x && v.x == 0.0;
  const bool y_done = p.y == target.y && v.y == 0.0;

  Trajectory2D out;
  if (x_done && y_done) {
    out.x = Profile1D(p.x);
    out.y = Profile1D(p.y);
    return out;
  }
  if (y_done) {
    out.x = planBangBang1D(p.x, v.x, target.x, limits.v_max, limits.a_max);
    out.y = Profile1D(p.y);
    out.alpha = 0.0;
    out.total_time = out.x.totalTime();
    return out;
  }
  if (x_done) {
    out.x = Profile1D(p.x);
    out.y = planBangBang1D(p.y, v.y, target.y, limits.v_max, limits.a_max);
    out.alpha = kPi / 2.0;
    out.total_time = out.y.totalTime();
    return out;
  }

  double lo = 0.0;
  double hi = kPi / 2.0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cfg.max_iterations; ++i) {
    const double alpha = 0.5 * (lo + hi);
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    Profile1D px = planBangBang1D(p.x, v.x, target.x, limits.v_max * c, limits.a_max * c);
    Profile1D py = planBangBang1D(p.y, v.y, target.y, limits.v_max * s, limits.a_max * s);
    const double gap = px.totalTime() - py.totalTime();
    if (std::abs(gap) < best_gap || (std::abs(gap) == best_gap && alpha < out.alpha)) {
      best_gap = std::abs(gap);
      out.x = px;
      out.y = py;
      out.alpha = alpha;
    }
    if (std::abs(gap) <= cfg.tolerance) break;
    if (gap > 0.0) {
      hi = alpha;
    } else {
      lo = alpha;
    }
  }
  out.total_time = std::max(out.x.totalTime(), out.y.totalTime());
  return out;
}

}  // namespace sslm

#endif  // SSLMOTION_TRAJECTORY_HPP_
