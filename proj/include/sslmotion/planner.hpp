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

// Obstacle-aware trajectory search.
//
// Candidates are bang-bang trajectories, tried in this order:
//   1. direct to the target (returned at once when collision free),
//   2. warm start: the previous tick's intermediate point, then jittered
//      copies of it,
//   3. constellation: rings of intermediate points around the robot,
//   4. movement reset: brake to rest, then go straight to the target.
// Each candidate is collision checked in time against the (inflated)
// obstacles and scored by total_time + penalty * (time left after the
// first contact). The lowest score wins.

#ifndef SSLMOTION_PLANNER_HPP_
#define SSLMOTION_PLANNER_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "sslmotion/geometry.hpp"
#include "sslmotion/trajectory.hpp"
#include "sslmotion/world.hpp"

namespace sslm {

struct PathLeg {
  Trajectory2D trajectory;
  double t_begin = 0.0;  // leg time 0 maps to path time t_begin
};

/// One or two chained 2D trajectories. A later leg takes over at its
/// `t_begin`; the last leg runs to rest at the final target.
class TrajectoryPath {
 public:
  static constexpr std::size_t kMaxLegs = 2;

  TrajectoryPath() = default;
  explicit TrajectoryPath(Trajectory2D single) { append(std::move(single), 0.0); }
  TrajectoryPath(Trajectory2D first, double switch_time, Trajectory2D second) {
    append(std::move(first), 0.0);
    append(std::move(second), switch_time);
  }

  std::span<const PathLeg> legs() const { return {legs_.data(), count_}; }
  double totalTime() const {
    return count_ == 0 ? 0.0 : legs_[count_ - 1].t_begin + legs_[count_ - 1].trajectory.total_time;
  }
  Vec2 target() const { return count_ == 0 ? Vec2{} : legs_[count_ - 1].trajectory.target(); }

  Sample2D sample(double t) const {
    if (count_ == 0) return {};
    std::size_t k = 0;
    while (k + 1 < count_ && t >= legs_[k + 1].t_begin) ++k;
    return legs_[k].trajectory.sample(t - legs_[k].t_begin);
  }

 private:
  void append(Trajectory2D leg, double t_begin) {
    legs_[count_++] = {std::move(leg), t_begin};
  }

  std::array<PathLeg, kMaxLegs> legs_{};
  std::size_t count_ = 0;
};

enum class CandidateKind { kDirect, kWarmStart, kConstellation, kReset, kHalt };

inline const char *toString(CandidateKind k) {
  switch (k) {
    case CandidateKind::kDirect: return "direct";
    case CandidateKind::kWarmStart: return "warm_start";
    case CandidateKind::kConstellation: return "constellation";
    case CandidateKind::kReset: return "reset";
    case CandidateKind::kHalt: return "halt";
  }
  return "?";
}

struct Collision {
  double time = 0.0;
  std::size_t obstacle = 0;
};

struct PlanResult {
  TrajectoryPath trajectory;
  std::optional<Vec2> intermediate;
  std::optional<double> collision_time;
  double total_time = 0.0;
  double score = 0.0;
  CandidateKind kind = CandidateKind::kDirect;
  int candidates_evaluated = 0;  // collision checks spent on this plan

  bool clean() const { return !collision_time.has_value(); }
};

struct SearchConfig {
  std::vector<double> constellation_radii = {0.3, 0.7, 1.2, 2.0};
  int constellation_angles = 16;
  int warm_start_points = 8;
  double warm_start_jitter = 0.1;
  double check_dt = 0.025;
  double collision_penalty = 5.0;
  int max_candidates = 128;
  // Added to the robot radius when inflating obstacles.
  double safety_margin = 0.02;
  // The second leg of an intermediate-point candidate starts once the first
  // leg gets this close to the intermediate point. 0 means "at rest on it".
  double pass_radius = 0.15;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(check_dt > 0.0)) throw std::invalid_argument("SearchConfig: check_dt must be > 0");
    for (std::size_t i = 0; i < constellation_radii.size(); ++i) {
      if (!(constellation_radii[i] > 0.0) ||
          (i > 0 && !(constellation_radii[i] > constellation_radii[i - 1]))) {
        throw std::invalid_argument("SearchConfig: radii must be positive and ascending");
      }
    }
    if (constellation_angles < 0 || warm_start_points < 0 || max_candidates < 1) {
      throw std::invalid_argument("SearchConfig: counts must be non-negative");
    }
    if (!(collision_penalty >= 0.0) || !(safety_margin >= 0.0) || !(pass_radius >= 0.0) ||
        !(warm_start_jitter >= 0.0)) {
      throw std::invalid_argument("SearchConfig: weights and margins must be >= 0");
    }
  }
};

struct PlanRequest {
  RobotState start;
  Vec2 target;
  MotionLimits limits;
  std::vector<Obstacle> obstacles;  // raw shapes; plan() inflates them
  std::optional<PlanResult> previous;
  GameConstraints constraints;
  FieldGeometry field;
  std::optional<Vec2> ball;  // needed when constraints carry a ball keep-out
  double robot_radius = kRobotRadius;
  bool goalkeeper = false;
};

/// Earliest sampled time in {0, dt, 2dt, ..., T} at which the path is
/// inside any obstacle evaluated at that same time.
inline std::optional<Collision> firstCollision(const TrajectoryPath &path,
                                               std::span<const Obstacle> obstacles,
                                               double check_dt) {
  if (!(check_dt > 0.0)) throw std::invalid_argument("firstCollision: check_dt must be > 0");
  if (obstacles.empty()) return std::nullopt;
  const double total = path.totalTime();
  for (std::size_t k = 0;; ++k) {
    const double t = std::min(static_cast<double>(k) * check_dt, total);
    const Vec2 p = path.sample(t).position;
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
      if (distanceToObstacle(p, obstacles[i], t) < 0.0) {
        return Collision{t, i};
      }
    }
    if (t >= total) break;
  }
  return std::nullopt;
}

inline std::optional<Collision> firstCollision(const Trajectory2D &traj,
                                               std::span<const Obstacle> obstacles,
                                               double check_dt) {
  return firstCollision(TrajectoryPath(traj), obstacles, check_dt);
}

namespace detail {

/// Collision check used for scoring. Obstacles the path starts inside only
/// count while the path goes deeper than its starting penetration; once the
/// path has left one it counts normally again. Escaping an overlap is then
/// a clean move rather than a collision at t=0.
inline std::optional<Collision> firstCollisionEscaping(const TrajectoryPath &path,
                                                       std::span<const Obstacle> obstacles,
                                                       double check_dt) {
  if (obstacles.empty()) return std::nullopt;
  constexpr double kSlack = 1e-9;
  const Vec2 p0 = path.sample(0.0).position;
  // Starting depth for overlapped obstacles, 0 for the rest.
  std::vector<double> floor(obstacles.size(), 0.0);
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    floor[i] = std::min(0.0, distanceToObstacle(p0, obstacles[i], 0.0)) - kSlack;
  }
  const double total = path.totalTime();
  for (std::size_t k = 0;; ++k) {
    const double t = std::min(static_cast<double>(k) * check_dt, total);
    const Vec2 p = path.sample(t).position;
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
      const double d = distanceToObstacle(p, obstacles[i], t);
      if (d >= 0.0) {
        floor[i] = 0.0;
      } else if (d < floor[i]) {
        return Collision{t, i};
      }
    }
    if (t >= total) break;
  }
  return std::nullopt;
}

inline MotionLimits effectiveLimits(const PlanRequest &req) {
  MotionLimits limits = req.limits;
  if (req.constraints.speed_cap) limits.v_max = std::min(limits.v_max, *req.constraints.speed_cap);
  return limits;
}

/// Obstacles as the search sees them: game keep-outs added, everything
/// grown by the robot radius plus the safety margin.
inline std::vector<Obstacle> searchObstacles(const PlanRequest &req, const SearchConfig &cfg) {
  std::vector<Obstacle> out;
  out.reserve(req.obstacles.size() + 3);
  const double margin = req.robot_radius + cfg.safety_margin;
  for (const Obstacle &o : req.obstacles) out.push_back(inflate(o, margin));
  if (req.constraints.defense_keepout_active && !req.goalkeeper) {
    out.push_back(inflate(req.field.ourDefenseArea(), margin));
    out.push_back(inflate(req.field.theirDefenseArea(), margin));
  }
  if (req.constraints.ball_keepout && req.ball) {
    out.push_back(KeepOutDisc{*req.ball, *req.constraints.ball_keepout + margin, true});
  }
  return out;
}

inline bool isStatic(const Obstacle &o) { return !std::holds_alternative<MovingDisc>(o); }

/// Moves `p` out of static obstacles (a few passes for overlaps) and into
/// the field.
inline Vec2 projectTarget(Vec2 p, std::span<const Obstacle> obstacles, const FieldGeometry &field) {
  constexpr double kPush = 1e-3;
  p = field.clampInside(p);
  for (int pass = 0; pass < 4; ++pass) {
    bool moved = false;
    for (const Obstacle &o : obstacles) {
      if (!isStatic(o) || distanceToObstacle(p, o, 0.0) >= 0.0) continue;
      const Vec2 edge = closestBoundaryPoint(p, o);
      Vec2 out_dir = (edge - p).normalized();
      if (out_dir == Vec2{}) out_dir = {1.0, 0.0};
      p = field.clampInside(edge + out_dir * kPush);
      moved = true;
    }
    if (!moved) break;
  }
  return p;
}

inline bool insideStatic(const Vec2 &p, std::span<const Obstacle> obstacles) {
  for (const Obstacle &o : obstacles) {
    if (isStatic(o) && distanceToObstacle(p, o, 0.0) < 0.0) return true;
  }
  return false;
}

/// First time the leg comes within `radius` of its own target, refined by
/// bisection between check samples. Returns the leg's total time when the
/// radius is 0.
inline double passTime(const Trajectory2D &leg, double radius, double dt) {
  const Vec2 goal = leg.target();
  const double total = leg.total_time;
  if (radius <= 0.0) return total;
  auto within = [&](double t) { return (leg.sample(t).position - goal).norm() <= radius; };
  double prev = 0.0;
  for (double t = 0.0;; t = std::min(t + dt, total)) {
    if (within(t)) {
      if (t == 0.0) return 0.0;
      double lo = prev;
      double hi = t;
      for (int i = 0; i < 20; ++i) {
        const double mid = 0.5 * (lo + hi);
        (within(mid) ? hi : lo) = mid;
      }
      return hi;
    }
    if (t >= total) return total;
    prev = t;
  }
}

}  // namespace detail

/// Brake along the current velocity at full deceleration, then plan a
/// rest-to-rest trajectory to the target. Scored like any candidate.
inline PlanResult resetCandidate(const PlanRequest &req, const SearchConfig &cfg = {}) {
  const MotionLimits limits = detail::effectiveLimits(req);
  const std::vector<Obstacle> obstacles = detail::searchObstacles(req, cfg);
  const Vec2 target = detail::projectTarget(req.target, obstacles, req.field);

  PlanResult r;
  r.kind = CandidateKind::kReset;
  const Vec2 v = req.start.velocity;
  const double speed = v.norm();
  if (speed == 0.0) {
    r.trajectory = TrajectoryPath(planSynchronized2D(req.start, target, limits));
  } else {
    const Vec2 dir = v / speed;
    Trajectory2D brake;
    brake.x = Profile1D::braking(req.start.position.x, v.x, limits.a_max * std::abs(dir.x));
    brake.y = Profile1D::braking(req.start.position.y, v.y, limits.a_max * std::abs(dir.y));
    brake.alpha = std::atan2(std::abs(dir.y), std::abs(dir.x));
    brake.total_time = speed / limits.a_max;
    RobotState rest;
    rest.position = brake.target();
    rest.heading = req.start.heading;
    r.trajectory =
        TrajectoryPath(brake, brake.total_time, planSynchronized2D(rest, target, limits));
  }
  r.total_time = r.trajectory.totalTime();
  r.candidates_evaluated = 1;
  if (auto hit = detail::firstCollisionEscaping(r.trajectory, obstacles, cfg.check_dt)) {
    r.collision_time = hit->time;
  }
  r.score = r.total_time + cfg.collision_penalty *
                               (r.collision_time ? r.total_time - *r.collision_time : 0.0);
  return r;
}

/// Best collision-checked trajectory for this tick. Deterministic in
/// (req, cfg); never throws on a blocked scene: when every candidate is in
/// contact within the first check step the reset candidate is returned with
/// its collision time.
inline PlanResult plan(const PlanRequest &req, const SearchConfig &cfg = {}) {
  cfg.validate();
  req.limits.validate();
  const MotionLimits limits = detail::effectiveLimits(req);
  const RobotState &start = req.start;

  if (req.constraints.speed_cap && *req.constraints.speed_cap <= 0.0) {
    // Halt: only braking is allowed.
    PlanResult r;
    r.kind = CandidateKind::kHalt;
    const Vec2 v = start.velocity;
    const double speed = v.norm();
    Trajectory2D brake;
    if (speed > 0.0) {
      brake.x = Profile1D::braking(start.position.x, v.x, req.limits.a_max * std::abs(v.x) / speed);
      brake.y = Profile1D::braking(start.position.y, v.y, req.limits.a_max * std::abs(v.y) / speed);
      brake.total_time = speed / req.limits.a_max;
    } else {
      brake.x = Profile1D(start.position.x);
      brake.y = Profile1D(start.position.y);
    }
    r.trajectory = TrajectoryPath(brake);
    r.total_time = r.score = brake.total_time;
    return r;
  }

  const std::vector<Obstacle> obstacles = detail::searchObstacles(req, cfg);
  const Vec2 target = detail::projectTarget(req.target, obstacles, req.field);
  int evaluated = 0;

  auto finish = [&](PlanResult r) {
    r.total_time = r.trajectory.totalTime();
    if (auto hit = detail::firstCollisionEscaping(r.trajectory, obstacles, cfg.check_dt)) {
      r.collision_time = hit->time;
    }
    r.score = r.total_time + cfg.collision_penalty *
                                 (r.collision_time ? r.total_time - *r.collision_time : 0.0);
    ++evaluated;
    return r;
  };
  auto viaPath = [&](const Vec2 &mid) -> std::optional<TrajectoryPath> {
    if ((mid - start.position).norm() <= cfg.pass_radius) return std::nullopt;
    const Trajectory2D first = planSynchronized2D(start, mid, limits);
    const double t_switch = detail::passTime(first, cfg.pass_radius, cfg.check_dt);
    const Sample2D s = first.sample(t_switch);
    RobotState from;
    from.position = s.position;
    from.velocity = s.velocity;
    from.heading = start.heading;
    return TrajectoryPath(first, t_switch, planSynchronized2D(from, target, limits));
  };
  auto usable = [&](const Vec2 &mid) {
    return req.field.contains(mid) && !detail::insideStatic(mid, obstacles);
  };

  PlanResult direct;
  direct.kind = CandidateKind::kDirect;
  direct.trajectory = TrajectoryPath(planSynchronized2D(start, target, limits));
  PlanResult best = finish(std::move(direct));
  if (best.clean()) {
    best.candidates_evaluated = evaluated;
    return best;
  }
  auto consider = [&](PlanResult r) {
    if (r.score < best.score) best = std::move(r);
  };

  // Warm start around the previous solution.
  if (req.previous && req.previous->intermediate) {
    const Vec2 prev = *req.previous->intermediate;
    if (usable(prev)) {
      if (auto path = viaPath(prev)) {
        PlanResult r;
        r.kind = CandidateKind::kWarmStart;
        r.intermediate = prev;
        r.trajectory = *path;
        r = finish(std::move(r));
        if (r.clean() && r.score <= best.score) {
          r.candidates_evaluated = evaluated;
          return r;
        }
        consider(std::move(r));
      }
    }
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> jitter(-cfg.warm_start_jitter, cfg.warm_start_jitter);
    for (int i = 0; i < cfg.warm_start_points && evaluated < cfg.max_candidates; ++i) {
      const double dx = jitter(rng);
      const double dy = jitter(rng);
      const Vec2 mid = prev + Vec2{dx, dy};
      if (!usable(mid)) continue;
      if (auto path = viaPath(mid)) {
        PlanResult r;
        r.kind = CandidateKind::kWarmStart;
        r.intermediate = mid;
        r.trajectory = *path;
        consider(finish(std::move(r)));
      }
    }
  }

  // Constellation. Cheapest first: score >= total_time, so once a
  // candidate's duration reaches the best score nothing later can win.
  struct Pending {
    Vec2 mid;
    TrajectoryPath path;
  };
  std::vector<Pending> ring;
  ring.reserve(cfg.constellation_radii.size() * static_cast<std::size_t>(cfg.constellation_angles));
  const Vec2 to_target = target - start.position;
  const double heading0 = to_target.squaredNorm() > 0.0 ? to_target.angle() : 0.0;
  for (double radius : cfg.constellation_radii) {
    for (int k = 0; k < cfg.constellation_angles; ++k) {
      const double angle = heading0 + 2.0 * kPi * k / cfg.constellation_angles;
      const Vec2 mid = start.position + unitFromAngle(angle) * radius;
      if (!usable(mid)) continue;
      if (auto path = viaPath(mid)) ring.push_back({mid, *path});
    }
  }
  std::stable_sort(ring.begin(), ring.end(), [](const Pending &a, const Pending &b) {
    return a.path.totalTime() < b.path.totalTime();
  });
  for (Pending &c : ring) {
    if (evaluated >= cfg.max_candidates - 1) break;  // keep one for the reset
    if (c.path.totalTime() >= best.score) break;
    PlanResult r;
    r.kind = CandidateKind::kConstellation;
    r.intermediate = c.mid;
    r.trajectory = std::move(c.path);
    consider(finish(std::move(r)));
  }

  // Movement reset. At rest it coincides with the direct candidate.
  std::optional<PlanResult> reset;
  if (start.velocity != Vec2{}) {
    reset = resetCandidate(req, cfg);
    ++evaluated;
    consider(*reset);
  }

  // Nothing avoids contact within the first check step: brake.
  if (best.collision_time && *best.collision_time <= cfg.check_dt) {
    PlanResult r = reset ? *reset : resetCandidate(req, cfg);
    r.candidates_evaluated = evaluated;
    return r;
  }
  best.candidates_evaluated = evaluated;
  return best;
}

}  // namespace sslm

#endif  // SSLMOTION_PLANNER_HPP_
