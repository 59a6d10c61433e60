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


#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "sslmotion/harness/bench.hpp"
#include "sslmotion/planner.hpp"

namespace sslm {
namespace {

TrajectoryPath straightLine(Vec2 from, Vec2 to, const MotionLimits &l = {}) {
  RobotState s;
  s.position = from;
  return TrajectoryPath(planSynchronized2D(s, to, l));
}

// Ground-truth entry time by dense sampling.
std::optional<double> denseEntry(const TrajectoryPath &path, const Obstacle &o, double dt = 1e-4) {
  for (double t = 0.0; t <= path.totalTime(); t += dt) {
    if (distanceToObstacle(path.sample(t).position, o, t) < 0.0) return t;
  }
  return std::nullopt;
}

TEST(FirstCollision, StaticDiscOnTheLine) {
  const TrajectoryPath path = straightLine({0.0, 0.0}, {2.0, 0.0});
  const Obstacle disc = StaticDisc{{1.0, 0.0}, 0.29};
  const auto hit = firstCollision(path, std::span(&disc, 1), 0.01);
  ASSERT_TRUE(hit.has_value());
  const auto truth = denseEntry(path, disc);
  ASSERT_TRUE(truth.has_value());
  EXPECT_GE(hit->time, *truth - 1e-4);
  EXPECT_LE(hit->time - *truth, 0.01 + 1e-4);
  EXPECT_LT(std::abs(path.sample(hit->time).position.x - 1.0), 0.29);
  EXPECT_GE(std::abs(path.sample(hit->time - 0.01).position.x - 1.0), 0.29);
}

TEST(FirstCollision, FarObstacleIsClear) {
  const TrajectoryPath path = straightLine({0.0, 0.0}, {2.0, 0.0});
  const Obstacle disc = StaticDisc{{1.0, 5.0}, 0.29};
  EXPECT_FALSE(firstCollision(path, std::span(&disc, 1), 0.01).has_value());
}

TEST(FirstCollision, OncomingDiscMeetsLater) {
  const MotionLimits l;
  const TrajectoryPath path = straightLine({0.0, 0.0}, {2.0, 0.0}, l);
  const Obstacle moving = MovingDisc{{4.0, 0.0}, 0.29, {-2.0, 0.0}, 3.0};
  const Obstacle still = StaticDisc{{1.0, 0.0}, 0.29};

  // Closed-form meet time: the triangular profile x(t) against the disc's
  // front edge 4 - 2t - 0.29.
  const double T = 2.0 * std::sqrt(2.0 / l.a_max);
  double meet = std::numeric_limits<double>::infinity();
  for (double r : oracle::quadraticRoots(0.5 * l.a_max, 2.0, -(4.0 - 0.29))) {
    if (r >= 0.0 && r <= T / 2.0) meet = std::min(meet, r);
  }
  // Second half: 2 - a/2 (T - t)^2 = 3.71 - 2t.
  for (double r : oracle::quadraticRoots(-0.5 * l.a_max, l.a_max * T + 2.0,
                                         2.0 - 0.5 * l.a_max * T * T - 3.71)) {
    if (r > T / 2.0 && r <= T) meet = std::min(meet, r);
  }
  ASSERT_TRUE(std::isfinite(meet));

  const double dt = 0.01;
  const auto hit = firstCollision(path, std::span(&moving, 1), dt);
  const auto hit_static = firstCollision(path, std::span(&still, 1), dt);
  ASSERT_TRUE(hit.has_value());
  ASSERT_TRUE(hit_static.has_value());
  EXPECT_GT(hit->time, hit_static->time);
  EXPECT_GE(hit->time, meet);
  EXPECT_LE(hit->time - meet, dt + 1e-12);
}

TEST(FirstCollision, RejectsNonPositiveStep) {
  const TrajectoryPath path = straightLine({0.0, 0.0}, {1.0, 0.0});
  const Obstacle disc = StaticDisc{{1.0, 5.0}, 0.29};
  EXPECT_THROW(firstCollision(path, std::span(&disc, 1), 0.0), std::invalid_argument);
}

TEST(Plan, EmptySceneIsTheDirectTrajectory) {
  PlanRequest req;
  req.start.position = {-1.0, 0.5};
  req.start.velocity = {0.5, -0.3};
  req.target = {2.0, -1.0};
  const PlanResult r = plan(req);
  const Trajectory2D direct = planSynchronized2D(req.start, req.target, req.limits);
  EXPECT_EQ(r.kind, CandidateKind::kDirect);
  EXPECT_FALSE(r.intermediate.has_value());
  EXPECT_TRUE(r.clean());
  EXPECT_EQ(r.total_time, direct.total_time);
  EXPECT_EQ(r.trajectory.legs().size(), 1u);
  EXPECT_EQ(r.trajectory.sample(0.37).position, direct.sample(0.37).position);
}

// Every candidate the search could consider, scored independently.
double exhaustiveBestScore(const PlanRequest &req, const SearchConfig &cfg) {
  const std::vector<Obstacle> obstacles = detail::searchObstacles(req, cfg);
  const Vec2 target = detail::projectTarget(req.target, obstacles, req.field);
  const MotionLimits limits = detail::effectiveLimits(req);
  auto score = [&](const TrajectoryPath &p) {
    const auto hit = detail::firstCollisionEscaping(p, obstacles, cfg.check_dt);
    return p.totalTime() + cfg.collision_penalty * (hit ? p.totalTime() - hit->time : 0.0);
  };
  double best = score(TrajectoryPath(planSynchronized2D(req.start, target, limits)));
  const Vec2 dir = target - req.start.position;
  for (double radius : cfg.constellation_radii) {
    for (int k = 0; k < cfg.constellation_angles; ++k) {
      const Vec2 mid = req.start.position + unitFromAngle(dir.angle() + 2.0 * kPi * k / cfg.constellation_angles) * radius;
      if (!req.field.contains(mid) || detail::insideStatic(mid, obstacles)) continue;
      const Trajectory2D first = planSynchronized2D(req.start, mid, limits);
      const double ts = detail::passTime(first, cfg.pass_radius, cfg.check_dt);
      RobotState from;
      from.position = first.sample(ts).position;
      from.velocity = first.sample(ts).velocity;
      best = std::min(best, score(TrajectoryPath(first, ts, planSynchronized2D(from, target, limits))));
    }
  }
  return best;
}

TEST(Plan, RoutesAroundDiscOnTheChord) {
  PlanRequest req;
  req.start.position = {-1.5, 0.0};
  req.target = {1.5, 0.0};
  req.obstacles.push_back(StaticDisc{{0.0, 0.0}, 0.2});
  const SearchConfig cfg;
  const PlanResult r = plan(req, cfg);
  ASSERT_TRUE(r.clean());
  ASSERT_TRUE(r.intermediate.has_value());
  EXPECT_GT(std::abs(r.intermediate->y), 1e-3);
  EXPECT_GT(r.total_time, planSynchronized2D(req.start, req.target, req.limits).total_time);
  EXPECT_DOUBLE_EQ(r.score, exhaustiveBestScore(req, cfg));

  const auto inflated = detail::searchObstacles(req, cfg);
  for (double t = 0.0; t <= r.total_time; t += cfg.check_dt) {
    EXPECT_GE(distanceToObstacle(r.trajectory.sample(t).position, inflated[0], t), 0.0);
  }
}

TEST(Plan, WarmStartReusesIntermediate) {
  PlanRequest req;
  req.start.position = {-1.5, 0.2};
  req.target = {1.5, -0.1};
  req.obstacles.push_back(StaticDisc{{0.0, 0.0}, 0.25});
  req.obstacles.push_back(StaticDisc{{0.2, 0.6}, 0.15});
  const SearchConfig cfg;
  const PlanResult cold = plan(req, cfg);
  ASSERT_TRUE(cold.intermediate.has_value());
  ASSERT_TRUE(cold.clean());

  req.previous = cold;
  const PlanResult warm = plan(req, cfg);
  EXPECT_EQ(warm.kind, CandidateKind::kWarmStart);
  ASSERT_TRUE(warm.intermediate.has_value());
  EXPECT_EQ(*warm.intermediate, *cold.intermediate);
  EXPECT_LE(warm.candidates_evaluated, 1 + cfg.warm_start_points);
  EXPECT_DOUBLE_EQ(warm.score, cold.score);

  // Converged: a third pass keeps the same point.
  req.previous = warm;
  EXPECT_EQ(*plan(req, cfg).intermediate, *cold.intermediate);
}

TEST(Plan, ResetBrakesThenReturns) {
  PlanRequest req;
  req.start.velocity = {2.0, 0.0};
  req.target = {-1.0, 0.0};
  req.limits.v_max = 2.0;
  req.limits.a_max = 2.0;
  const PlanResult r = resetCandidate(req);
  EXPECT_EQ(r.kind, CandidateKind::kReset);
  ASSERT_EQ(r.trajectory.legs().size(), 2u);
  EXPECT_NEAR(r.trajectory.legs()[1].t_begin, 1.0, 1e-12);
  EXPECT_NEAR(r.trajectory.sample(1.0).position.x, 1.0, 1e-12);
  EXPECT_NEAR(r.total_time, 1.0 + oracle::bangBangTime(1.0, 0.0, -1.0, 2.0, 2.0), 1e-12);
  const auto [x, v] = oracle::simulate(
      0.0, 2.0, [&](double t) { return r.trajectory.sample(t).acceleration.x; }, r.total_time, 1e-5);
  EXPECT_NEAR(x, -1.0, 1e-4);
  EXPECT_NEAR(v, 0.0, 1e-4);
}

TEST(Plan, ResetAtRestEqualsDirect) {
  PlanRequest req;
  req.start.position = {0.5, 0.5};
  req.target = {-2.0, 1.0};
  const PlanResult r = resetCandidate(req);
  EXPECT_EQ(r.total_time, planSynchronized2D(req.start, req.target, req.limits).total_time);
}

TEST(Plan, OrthogonalVelocityPicksCheaperOfDirectAndReset) {
  PlanRequest req;
  req.start.velocity = {0.0, 2.0};
  req.target = {3.0, 0.0};
  const PlanResult r = plan(req);
  const PlanResult reset = resetCandidate(req);
  const double direct = planSynchronized2D(req.start, req.target, req.limits).total_time;
  EXPECT_LE(r.score, direct + 1e-12);
  EXPECT_LE(r.score, reset.score + 1e-12);
  EXPECT_DOUBLE_EQ(r.score, std::min(direct, reset.score));
}

TEST(Plan, HaltOnlyBrakes) {
  PlanRequest req;
  req.start.velocity = {1.2, -0.9};
  req.target = {3.0, 3.0};
  req.constraints.speed_cap = 0.0;
  const PlanResult r = plan(req);
  EXPECT_EQ(r.kind, CandidateKind::kHalt);
  EXPECT_NEAR(r.total_time, 1.5 / req.limits.a_max, 1e-12);
  const Vec2 end = r.trajectory.sample(r.total_time).position;
  const Vec2 expected = req.start.velocity * (0.5 * r.total_time);
  EXPECT_NEAR(end.x, expected.x, 1e-12);
  EXPECT_NEAR(end.y, expected.y, 1e-12);
}

TEST(Plan, SpeedCapLimitsTrajectory) {
  PlanRequest req;
  req.target = {3.0, 1.0};
  req.constraints.speed_cap = 1.5;
  const PlanResult r = plan(req);
  for (double t = 0.0; t < r.total_time; t += 0.01) {
    EXPECT_LE(r.trajectory.sample(t).velocity.norm(), 1.5 + 1e-9);
  }
}

TEST(Plan, DefenseAreaBlocksFieldPlayersOnly) {
  PlanRequest req;
  req.start.position = {2.8, -1.6};
  req.target = {2.8, 1.6};
  req.obstacles.push_back(StaticDisc{{2.8, 0.0}, 0.3});
  const SearchConfig cfg;
  const PlanResult r = plan(req, cfg);
  ASSERT_TRUE(r.clean());
  const Rect area = req.field.theirDefenseArea();
  for (double t = 0.0; t <= r.total_time; t += cfg.check_dt) {
    EXPECT_GE(signedDistanceToRect(r.trajectory.sample(t).position, area), req.robot_radius);
  }
  req.goalkeeper = true;
  req.start.position = {4.0, -0.5};
  req.target = {4.0, 0.5};
  req.obstacles.clear();
  EXPECT_TRUE(plan(req, cfg).clean());
}

TEST(Plan, TargetInsideObstacleIsProjectedOut) {
  PlanRequest req;
  req.target = {1.0, 0.0};
  req.obstacles.push_back(StaticDisc{{1.0, 0.0}, 0.3});
  const SearchConfig cfg;
  const PlanResult r = plan(req, cfg);
  const auto inflated = detail::searchObstacles(req, cfg);
  EXPECT_GE(distanceToObstacle(r.trajectory.target(), inflated[0], 0.0), 0.0);
}

TEST(Plan, BallKeepOutDuringStop) {
  PlanRequest req;
  req.start.position = {-2.0, 0.0};
  req.target = {2.0, 0.0};
  req.ball = Vec2{0.0, 0.0};
  req.constraints.ball_keepout = 0.5;
  req.constraints.speed_cap = 1.5;
  const PlanResult r = plan(req);
  ASSERT_TRUE(r.clean());
  for (double t = 0.0; t <= r.total_time; t += 0.025) {
    EXPECT_GE(r.trajectory.sample(t).position.norm() - req.robot_radius, 0.5);
  }
}

TEST(Plan, EscapesWhenStartingInsideKeepOut) {
  PlanRequest req;
  req.start.position = {-3.5, -1.0};  // on our defense-area corner
  req.start.velocity = {0.5, 0.0};
  req.target = {3.0, -1.0};
  const PlanResult r = plan(req);
  EXPECT_TRUE(r.clean());
  EXPECT_GT(r.trajectory.sample(0.2).position.x, req.start.position.x);
}

TEST(Plan, BlockedSceneReturnsReset) {
  PlanRequest req;
  req.start.velocity = {2.0, 0.0};
  req.target = {2.0, 0.0};
  // A wall 2 cm ahead of the inflated envelope: nothing stops in time.
  req.obstacles.push_back(Rect{{0.13, -3.5}, {0.5, 3.5}});
  const PlanResult r = plan(req);
  EXPECT_EQ(r.kind, CandidateKind::kReset);
  ASSERT_FALSE(r.clean());
  EXPECT_LE(*r.collision_time, SearchConfig{}.check_dt);
}

TEST(Plan, Deterministic) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    PlanRequest req = randomScene(rng, 15, 0.5);
    SearchConfig cfg;
    cfg.seed = 99;
    const PlanResult a = plan(req, cfg);
    const PlanResult b = plan(req, cfg);
    EXPECT_EQ(a.score, b.score);
    EXPECT_EQ(a.kind, b.kind);
    EXPECT_EQ(a.intermediate.has_value(), b.intermediate.has_value());
    if (a.intermediate) {
      EXPECT_EQ(*a.intermediate, *b.intermediate);
    }
    EXPECT_EQ(a.candidates_evaluated, b.candidates_evaluated);
  }
}

TEST(Plan, AnytimeDominanceAndBudget) {
  std::mt19937_64 rng(6);
  const SearchConfig cfg;
  for (int i = 0; i < 300; ++i) {
    PlanRequest req = randomScene(rng, 15, 0.5);
    const PlanResult r = plan(req, cfg);
    const auto obstacles = detail::searchObstacles(req, cfg);
    const Vec2 target = detail::projectTarget(req.target, obstacles, req.field);
    const TrajectoryPath direct(planSynchronized2D(req.start, target, detail::effectiveLimits(req)));
    const auto hit = detail::firstCollisionEscaping(direct, obstacles, cfg.check_dt);
    const double direct_score =
        direct.totalTime() + cfg.collision_penalty * (hit ? direct.totalTime() - hit->time : 0.0);
    const PlanResult reset = resetCandidate(req, cfg);
    if (!(r.collision_time && *r.collision_time <= cfg.check_dt)) {
      EXPECT_LE(r.score, direct_score + 1e-12);
      EXPECT_LE(r.score, reset.score + 1e-12);
    }
    EXPECT_LE(r.candidates_evaluated, cfg.max_candidates);
  }
}

TEST(Plan, CleanPlansKeepClearanceWhenResampled) {
  std::mt19937_64 rng(8);
  const SearchConfig cfg;
  int clean = 0;
  for (int i = 0; i < 300; ++i) {
    PlanRequest req = randomScene(rng, 12, 0.5);
    const auto inflated = detail::searchObstacles(req, cfg);
    bool start_free = true;
    for (const Obstacle &o : inflated) start_free &= distanceToObstacle(req.start.position, o, 0.0) >= 0.0;
    if (!start_free) continue;
    const PlanResult r = plan(req, cfg);
    if (!r.clean()) continue;
    ++clean;
    const double v_max = detail::effectiveLimits(req).v_max;
    for (double t = 0.0; t <= r.total_time; t += cfg.check_dt) {
      for (const Obstacle &o : inflated) {
        EXPECT_GE(distanceToObstacle(r.trajectory.sample(t).position, o, t), 0.0);
      }
    }
    const double fine = cfg.check_dt / 10.0;
    for (double t = 0.0; t <= r.total_time; t += fine) {
      for (const Obstacle &o : inflated) {
        EXPECT_GE(distanceToObstacle(r.trajectory.sample(t).position, o, t), -v_max * cfg.check_dt);
      }
    }
  }
  EXPECT_GT(clean, 100);
}

TEST(SearchConfig, Validate) {
  SearchConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.constellation_radii = {0.7, 0.3};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = SearchConfig{};
  cfg.check_dt = 0.0;
  EXPECT_THROW(plan(PlanRequest{}, cfg), std::invalid_argument);
}

TEST(PassTime, EntersRadiusOnce) {
  RobotState s;
  const Trajectory2D leg = planSynchronized2D(s, {2.0, 0.0}, MotionLimits{});
  const double ts = detail::passTime(leg, 0.15, 0.025);
  EXPECT_NEAR((leg.sample(ts).position - Vec2{2.0, 0.0}).norm(), 0.15, 1e-5);
  EXPECT_EQ(detail::passTime(leg, 0.0, 0.025), leg.total_time);
}

}  // namespace
}  // namespace sslm
