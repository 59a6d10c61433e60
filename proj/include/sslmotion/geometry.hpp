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

#ifndef SSLMOTION_GEOMETRY_HPP_
#define SSLMOTION_GEOMETRY_HPP_

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sslm {

inline constexpr double kPi = std::numbers::pi;

/// Planar vector in meters (positions) or m/s (velocities), world frame
/// unless stated otherwise.
///
/// Components are always finite: the value constructor rejects NaN/Inf so a
/// bad number is caught where it enters rather than deep inside a planner.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  Vec2(double x_in, double y_in) : x(x_in), y(y_in) {
    if (!std::isfinite(x_in) || !std::isfinite(y_in)) {
      throw std::invalid_argument("Vec2: non-finite component");
    }
  }

  Vec2 operator+(const Vec2 &o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2 &o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2 &operator+=(const Vec2 &o) { return *this = *this + o; }
  Vec2 &operator-=(const Vec2 &o) { return *this = *this - o; }
  Vec2 &operator*=(double s) { return *this = *this * s; }

  bool operator==(const Vec2 &) const = default;

  double dot(const Vec2 &o) const { return x * o.x + y * o.y; }
  double cross(const Vec2 &o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double squaredNorm() const { return x * x + y * y; }
  double angle() const { return std::atan2(y, x); }

  /// Unit vector, or zero when the norm is below `eps`.
  Vec2 normalized(double eps = 1e-12) const {
    const double n = norm();
    return n > eps ? Vec2{x / n, y / n} : Vec2{};
  }
  /// Counter-clockwise rotation by `theta` radians.
  Vec2 rotated(double theta) const {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c * x - s * y, s * x + c * y};
  }
  /// Counter-clockwise perpendicular.
  Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, const Vec2 &v) { return v * s; }

inline Vec2 unitFromAngle(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Wraps an angle into (-pi, pi].
inline double wrapAngle(double a) {
  if (!std::isfinite(a)) {
    throw std::invalid_argument("wrapAngle: non-finite angle");
  }
  a = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

inline std::string toString(const Vec2 &v) {
  return "(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ")";
}

}  // namespace sslm

#endif  // SSLMOTION_GEOMETRY_HPP_
