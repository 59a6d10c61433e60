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

#ifndef SSLMOTION_WORLD_HPP_
#define SSLMOTION_WORLD_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>

#include "sslmotion/geometry.hpp"

namespace sslm {

/// Default robot envelope: an SSL robot is modelled as a disc.
inline constexpr double kRobotRadius = 0.09;

struct RobotState {
  Vec2 position;
  Vec2 velocity;           // world frame
  double heading = 0.0;    // (-pi, pi]
  double angular_velocity = 0.0;

  bool operator==(const RobotState &) const = default;
};

struct MotionLimits {
  double v_max = 2.5;
  double a_max = 3.0;
  double omega_max = 6.0;
  double alpha_max = 12.0;

  void validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(v_max) || !positive(a_max) || !positive(omega_max) || !positive(alpha_max)) {
      throw std::invalid_argument("MotionLimits: all limits must be finite and > 0");
    }
  }
};

struct StaticDisc {
  Vec2 center;
  double radius = 0.0;
};

/// A disc moving at constant velocity until `horizon`, where its
/// extrapolated position freezes.
struct MovingDisc {
  Vec2 center;
  double radius = 0.0;
  Vec2 velocity;
  double horizon = 1.0;

  Vec2 centerAt(double t) const { return center + velocity * std::min(t, horizon); }
};

/// Axis-aligned rectangle; defense areas use this shape.
struct Rect {
  Vec2 min;
  Vec2 max;
};

/// Switchable disc around a point, e.g. the ball keep-out during stops.
struct KeepOutDisc {
  Vec2 center;
  double radius = 0.0;
  bool active = true;
};

using Obstacle = std::variant<StaticDisc, MovingDisc, Rect, KeepOutDisc>;

inline void validate(const Obstacle &obs) {
  std::visit(
      [](const auto &o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Rect>) {
          if (!(o.min.x < o.max.x && o.min.y < o.max.y)) {
            throw std::invalid_argument("Rect: min must be < max componentwise");
          }
        } else {
          if (!(std::isfinite(o.radius) && o.radius > 0.0)) {
            throw std::invalid_argument("obstacle radius must be > 0");
          }
          if constexpr (std::is_same_v<T, MovingDisc>) {
            if (!(o.horizon >= 0.0) || !std::isfinite(o.horizon)) {
              throw std::invalid_argument("MovingDisc horizon must be >= 0");
            }
          }
        }
      },
      obs);
}

inline const char *obstacleKind(const Obstacle &obs) {
  constexpr std::array<const char *, 4> kNames = {"static_disc", "moving_disc", "rect",
                                                  "keep_out_disc"};
  return kNames[obs.index()];
}

/// Signed distance from `p` to a rectangle: negative inside.
inline double signedDistanceToRect(const Vec2 &p, const Rect &r) {
  const double cx = 0.5 * (r.min.x + r.max.x);
  const double cy = 0.5 * (r.min.y + r.max.y);
  const double qx = std::abs(p.x - cx) - 0.5 * (r.max.x - r.min.x);
  const double qy = std::abs(p.y - cy) - 0.5 * (r.max.y - r.min.y);
  const double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
  const double inside = std::min(std::max(qx, qy), 0.0);
  return outside + inside;
}

/// Signed Euclidean clearance of `p` to the obstacle shape at time `t`
/// (seconds from now). Negative means `p` is inside. An inactive keep-out
/// is infinitely far away.
inline double distanceToObstacle(const Vec2 &p, const Obstacle &obs, double t) {
  struct Visitor {
    const Vec2 &p;
    double t;
    double operator()(const StaticDisc &o) const { return (p - o.center).norm() - o.radius; }
    double operator()(const MovingDisc &o) const { return (p - o.centerAt(t)).norm() - o.radius; }
    double operator()(const Rect &o) const { return signedDistanceToRect(p, o); }
    double operator()(const KeepOutDisc &o) const {
      return o.active ? (p - o.center).norm() - o.radius
                      : std::numeric_limits<double>::infinity();
    }
  };
  return std::visit(Visitor{p, std::max(t, 0.0)}, obs);
}

/// Grows the obstacle by `margin` on every side; the shape tag is kept.
inline Obstacle inflate(const Obstacle &obs, double margin) {
  if (!(margin >= 0.0)) {
    throw std::invalid_argument("inflate: margin must be >= 0");
  }
  return std::visit(
      [margin](auto o) -> Obstacle {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Rect>) {
          o.min = o.min - Vec2{margin, margin};
          o.max = o.max + Vec2{margin, margin};
        } else {
          o.radius += margin;
        }
        return o;
      },
      obs);
}

/// Point on the obstacle boundary closest to `p` for the static shapes;
/// used to push targets out of keep-outs. Moving discs are evaluated at t=0.
inline Vec2 closestBoundaryPoint(const Vec2 &p, const Obstacle &obs) {
  struct Visitor {
    const Vec2 &p;
    Vec2 disc(const Vec2 &c, double r) const {
      Vec2 dir = (p - c).normalized();
      if (dir == Vec2{}) dir = {1.0, 0.0};
      return c + dir * r;
    }
    Vec2 operator()(const StaticDisc &o) const { return disc(o.center, o.radius); }
    Vec2 operator()(const MovingDisc &o) const { return disc(o.center, o.radius); }
    Vec2 operator()(const KeepOutDisc &o) const { return disc(o.center, o.radius); }
    Vec2 operator()(const Rect &o) const {
      const bool inside = p.x > o.min.x && p.x < o.max.x && p.y > o.min.y && p.y < o.max.y;
      if (!inside) {
        return {std::clamp(p.x, o.min.x, o.max.x), std::clamp(p.y, o.min.y, o.max.y)};
      }
      const std::array<double, 4> gaps = {p.x - o.min.x, o.max.x - p.x, p.y - o.min.y,
                                          o.max.y - p.y};
      const auto k = std::min_element(gaps.begin(), gaps.end()) - gaps.begin();
      switch (k) {
        case 0: return {o.min.x, p.y};
        case 1: return {o.max.x, p.y};
        case 2: return {p.x, o.min.y};
        default: return {p.x, o.max.y};
      }
    }
  };
  return std::visit(Visitor{p}, obs);
}

/// Field centered on the origin, x along the length toward the opponent
/// goal, y to the left.
struct FieldGeometry {
  double length = 9.0;
  double width = 6.0;
  double defense_area_depth = 1.0;
  double defense_area_width = 2.0;
  double boundary_margin = 0.2;

  void validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(length) || !positive(width) || !positive(defense_area_depth) ||
        !positive(defense_area_width) || !positive(boundary_margin)) {
      throw std::invalid_argument("FieldGeometry: all dimensions must be > 0");
    }
    if (defense_area_depth >= 0.5 * length || defense_area_width >= width) {
      throw std::invalid_argument("FieldGeometry: defense areas must lie inside the field");
    }
    if (2.0 * boundary_margin >= std::min(length, width)) {
      throw std::invalid_argument("FieldGeometry: boundary margin too large");
    }
  }

  Rect ourDefenseArea() const {
    return {{-0.5 * length, -0.5 * defense_area_width},
            {-0.5 * length + defense_area_depth, 0.5 * defense_area_width}};
  }
  Rect theirDefenseArea() const {
    return {{0.5 * length - defense_area_depth, -0.5 * defense_area_width},
            {0.5 * length, 0.5 * defense_area_width}};
  }

  /// Clamps into the playing area shrunk by `boundary_margin`.
  Vec2 clampInside(const Vec2 &p) const {
    const double hx = 0.5 * length - boundary_margin;
    const double hy = 0.5 * width - boundary_margin;
    return {std::clamp(p.x, -hx, hx), std::clamp(p.y, -hy, hy)};
  }
  bool contains(const Vec2 &p) const { return clampInside(p) == p; }
};

/// Restrictions the current game situation places on motion planning.
struct GameConstraints {
  std::optional<double> speed_cap;     // m/s
  std::optional<double> ball_keepout;  // m, measured from the robot edge
  bool defense_keepout_active = true;
  bool may_touch_ball = true;

  bool operator==(const GameConstraints &) const = default;
};

}  // namespace sslm

#endif  // SSLMOTION_WORLD_HPP_
