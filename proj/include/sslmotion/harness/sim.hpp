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

// Fixed-step kinematic simulator and the closed loop around it.
//
// World is the physical truth: robot bodies, moving obstacles and the
// vision frames in flight. Simulator runs the software stack on top of
// it, once per tick:
//   referee parse -> constraints -> latency-compensated estimate
//   -> planner (on each delivered frame) -> trajectory following -> step.
// Stages exchange immutable messages through inboxes/mailboxes; per-robot
// planning may run in parallel and the tick is the only sync point.

#ifndef SSLMOTION_HARNESS_SIM_HPP_
#define SSLMOTION_HARNESS_SIM_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <future>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "json.hpp"
#include "sslmotion/estimator.hpp"
#include "sslmotion/harness/scenario.hpp"
#include "sslmotion/navigation.hpp"
#include "sslmotion/pipeline.hpp"
#include "sslmotion/planner.hpp"
#include "sslmotion/refparser.hpp"
#include "sslmotion/world.hpp"

namespace sslm {

struct Body {
  int id = 0;
  RobotState state;
  VelocityCommand command;
  MotionLimits limits;
  bool goalkeeper = false;
  double step_clearance = std::numeric_limits<double>::infinity();  // min over last step
};

/// Truth captured by the cameras at `t_capture`, visible from `deliver_at`.
struct VisionSnapshot {
  double t_capture = 0.0;
  double deliver_at = 0.0;
  std::vector<RobotState> robots;     // index-aligned with World::bodies
  std::vector<Obstacle> obstacles;    // moving discs as seen at capture
};

struct World {
  double time = 0.0;
  FieldGeometry field;
  std::vector<Body> bodies;
  std::vector<Obstacle> obstacles;  // shapes at t=0; moving discs advance with time
  std::optional<Vec2> ball;
  VisionConfig vision;
  double robot_radius = kRobotRadius;
  int clearance_substeps = 10;
  std::uint64_t frames_captured = 0;
  std::deque<VisionSnapshot> in_flight;
};

/// Obstacle truth at absolute time `t`.
inline Obstacle obstacleAt(const Obstacle &o, double t) {
  if (const auto *m = std::get_if<MovingDisc>(&o)) {
    MovingDisc now = *m;
    now.center = m->centerAt(t);
    now.horizon = std::max(0.0, m->horizon - t);
    if (now.horizon == 0.0) now.velocity = Vec2{};
    return now;
  }
  return o;
}

inline bool isPhysical(const Obstacle &o) { return !std::holds_alternative<KeepOutDisc>(o); }

namespace detail {

/// Mean of a twist ramping linearly from `from` to `to`, taken over the
/// first `fraction` of the ramp.
inline BodyTwist meanTwist(const BodyTwist &from, const BodyTwist &to, double fraction) {
  const double k = 0.5 * fraction;
  return {from.vx + (to.vx - from.vx) * k, from.vy + (to.vy - from.vy) * k,
          from.omega + (to.omega - from.omega) * k};
}

inline void captureFrame(World &w) {
  VisionSnapshot snap;
  snap.t_capture = w.time;
  snap.deliver_at = w.time + w.vision.latency_s;
  for (const Body &b : w.bodies) snap.robots.push_back(b.state);
  for (const Obstacle &o : w.obstacles) snap.obstacles.push_back(obstacleAt(o, w.time));
  w.in_flight.push_back(std::move(snap));
  ++w.frames_captured;
}

inline void captureDueFrames(World &w) {
  const double period = 1.0 / w.vision.rate_hz;
  if (static_cast<double>(w.frames_captured) * period <= w.time + 1e-9) {
    captureFrame(w);
    while (static_cast<double>(w.frames_captured) * period <= w.time + 1e-9) ++w.frames_captured;
  }
}

}  // namespace detail

inline World makeWorld(const Scenario &s) {
  World w;
  w.field = s.field;
  w.obstacles = s.obstacles;
  w.ball = s.ball;
  w.vision = s.vision;
  w.clearance_substeps = std::max(1, s.sim.clearance_substeps);
  for (const RobotSpec &r : s.robots) {
    Body b;
    b.id = r.id;
    b.state = r.start;
    b.limits = r.limits;
    b.goalkeeper = r.goalkeeper;
    w.bodies.push_back(b);
  }
  detail::captureFrame(w);
  return w;
}

/// Advances the physical world by `dt` in place. Like the wheel
/// controllers of an omni base, each body slews its robot-frame twist
/// toward the command at no more than a_max (and alpha_max for yaw); the
/// pose follows the arc of the step's mean twist. Due vision frames are
/// captured at the new time, `new_time` when given (callers on a fixed
/// grid pass it to avoid drift).
inline void advance(World &w, double dt, std::optional<double> new_time = std::nullopt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
  struct Motion {
    Pose2 pose;
    BodyTwist from, to;
  };
  std::vector<Motion> motion;
  motion.reserve(w.bodies.size());
  for (Body &b : w.bodies) {
    RobotState &s = b.state;
    const Vec2 body_v = s.velocity.rotated(-s.heading);
    Vec2 dv = Vec2{b.command.vx, b.command.vy} - body_v;
    const double max_dv = b.limits.a_max * dt;
    if (dv.norm() > max_dv) dv = dv * (max_dv / dv.norm());
    const double max_dw = b.limits.alpha_max * dt;
    const double dw = std::clamp(b.command.omega - s.angular_velocity, -max_dw, max_dw);

    const BodyTwist from{body_v.x, body_v.y, s.angular_velocity};
    const BodyTwist to{body_v.x + dv.x, body_v.y + dv.y, s.angular_velocity + dw};
    const Motion m{{s.position, s.heading}, from, to};
    motion.push_back(m);
    const Pose2 next = integrateTwist(m.pose, detail::meanTwist(from, to, 1.0), dt);
    s.position = next.position;
    s.heading = wrapAngle(next.heading);
    s.velocity = Vec2{to.vx, to.vy}.rotated(s.heading);
    s.angular_velocity = to.omega;
  }

  // Physical clearance on a fine grid inside the step.
  const int n = w.clearance_substeps;
  for (Body &b : w.bodies) b.step_clearance = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= n; ++k) {
    const double s = dt * k / n;
    const double t_abs = w.time + s;
    std::vector<Vec2> pos;
    pos.reserve(motion.size());
    for (const Motion &m : motion) {
      pos.push_back(integrateTwist(m.pose, detail::meanTwist(m.from, m.to, s / dt), s).position);
    }
    for (std::size_t i = 0; i < w.bodies.size(); ++i) {
      double c = w.bodies[i].step_clearance;
      for (const Obstacle &o : w.obstacles) {
        if (!isPhysical(o)) continue;
        c = std::min(c, distanceToObstacle(pos[i], obstacleAt(o, t_abs), 0.0) - w.robot_radius);
      }
      for (std::size_t j = 0; j < w.bodies.size(); ++j) {
        if (j != i) c = std::min(c, (pos[i] - pos[j]).norm() - 2.0 * w.robot_radius);
      }
      w.bodies[i].step_clearance = c;
    }
  }

  w.time = new_time.value_or(w.time + dt);
  detail::captureDueFrames(w);
}

/// Value-returning form of `advance`.
inline World step(World w, double dt) {
  advance(w, dt);
  return w;
}

enum class FoulKind { kBotCrashUnique, kAttackerTooCloseToDefenseArea, kDefenderTooCloseToKickPoint };

inline const char *toString(FoulKind k) {
  switch (k) {
    case FoulKind::kBotCrashUnique: return "BOT_CRASH_UNIQUE";
    case FoulKind::kAttackerTooCloseToDefenseArea: return "ATTACKER_TOO_CLOSE_TO_DEFENSE_AREA";
    case FoulKind::kDefenderTooCloseToKickPoint: return "DEFENDER_TOO_CLOSE_TO_KICK_POINT";
  }
  return "?";
}

struct FoulEvent {
  double t = 0.0;
  FoulKind kind = FoulKind::kBotCrashUnique;
  int robot = 0;
  int other = -1;  // robot id, or 1000 + obstacle index; -1 if none
};

struct FoulConfig {
  double crash_speed = 1.5;
  double debounce_s = 1.0;
  double defense_margin = 0.0;
  double ball_keepout = 0.5;
};

/// Rule evaluation with debouncing: a violation that continues, or comes
/// back within `debounce_s` of the last violating instant, is one event.
class FoulDetector {
 public:
  explicit FoulDetector(FoulConfig cfg = {}) : cfg_(cfg) {}

  std::vector<FoulEvent> detect(const World &w, const GameStateLeaf &leaf) {
    std::vector<FoulEvent> events;
    auto report = [&](FoulKind kind, int robot, int other) {
      const auto key = std::make_tuple(static_cast<int>(kind), robot, other);
      auto it = last_seen_.find(key);
      if (it == last_seen_.end() || w.time - it->second > cfg_.debounce_s) {
        events.push_back({w.time, kind, robot, other});
      }
      last_seen_[key] = w.time;
    };
    const double r = w.robot_radius;
    const bool halted = std::holds_alternative<HaltLeaf>(leaf);
    const bool formation = std::holds_alternative<DynamicFormation>(leaf);

    for (std::size_t i = 0; i < w.bodies.size(); ++i) {
      const Body &a = w.bodies[i];
      for (std::size_t j = i + 1; j < w.bodies.size(); ++j) {
        const Body &b = w.bodies[j];
        if (crashing(a.state.position, a.state.velocity, b.state.position, b.state.velocity, 2.0 * r)) {
          report(FoulKind::kBotCrashUnique, a.id, b.id);
        }
      }
      for (std::size_t k = 0; k < w.obstacles.size(); ++k) {
        const Obstacle o = obstacleAt(w.obstacles[k], w.time);
        Vec2 center;
        Vec2 velocity;
        double radius = 0.0;
        if (const auto *m = std::get_if<MovingDisc>(&o)) {
          center = m->center;
          velocity = m->velocity;
          radius = m->radius;
        } else if (const auto *d = std::get_if<StaticDisc>(&o)) {
          center = d->center;
          radius = d->radius;
        } else {
          continue;
        }
        if (crashing(a.state.position, a.state.velocity, center, velocity, r + radius)) {
          report(FoulKind::kBotCrashUnique, a.id, 1000 + static_cast<int>(k));
        }
      }
      if (!halted && !a.goalkeeper &&
          signedDistanceToRect(a.state.position, w.field.theirDefenseArea()) <
              r + cfg_.defense_margin) {
        report(FoulKind::kAttackerTooCloseToDefenseArea, a.id, -1);
      }
      if (formation && w.ball &&
          (a.state.position - *w.ball).norm() - r < cfg_.ball_keepout) {
        report(FoulKind::kDefenderTooCloseToKickPoint, a.id, -1);
      }
    }
    return events;
  }

 private:
  bool crashing(const Vec2 &pa, const Vec2 &va, const Vec2 &pb, const Vec2 &vb,
                double contact) const {
    const Vec2 d = pa - pb;
    const double dist = d.norm();
    if (dist >= contact) return false;
    if (dist == 0.0) return (va - vb).norm() > cfg_.crash_speed;
    const double closing = -(va - vb).dot(d / dist);
    return closing > cfg_.crash_speed;
  }

  FoulConfig cfg_;
  std::map<std::tuple<int, int, int>, double> last_seen_;
};

/// Free-function form over a detector's debounce state.
inline std::vector<FoulEvent> detectFouls(const World &w, const GameStateLeaf &leaf,
                                          FoulDetector &detector) {
  return detector.detect(w, leaf);
}

struct LatencyStats {
  std::size_t samples = 0;
  double median_ms = 0.0;
  double p95_ms = 0.0;
  double p99_ms = 0.0;
  double max_ms = 0.0;
};

/// Nearest-rank percentiles of `samples_ms`.
inline LatencyStats latencyStats(std::vector<double> samples_ms) {
  LatencyStats s;
  s.samples = samples_ms.size();
  if (samples_ms.empty()) return s;
  std::sort(samples_ms.begin(), samples_ms.end());
  auto rank = [&](double q) {
    const auto n = samples_ms.size();
    std::size_t idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    idx = std::clamp<std::size_t>(idx, 1, n) - 1;
    return samples_ms[idx];
  };
  s.median_ms = rank(0.5);
  s.p95_ms = rank(0.95);
  s.p99_ms = rank(0.99);
  s.max_ms = samples_ms.back();
  return s;
}

struct TraceRow {
  double t = 0.0;
  int id = 0;
  RobotState truth;
  RobotState estimate;
  VelocityCommand command;
};

struct RobotReport {
  int id = 0;
  std::optional<double> completion_time;
  double min_clearance = std::numeric_limits<double>::infinity();
  double max_speed = 0.0;
  double max_estimator_position_error = 0.0;
  double max_estimator_heading_error = 0.0;
  int plans = 0;
  RobotState final_state;
};

struct FoulCounts {
  int bot_crash_unique = 0;
  int attacker_too_close_to_defense_area = 0;
  int defender_too_close_to_kick_point = 0;

  int total() const {
    return bot_crash_unique + attacker_too_close_to_defense_area + defender_too_close_to_kick_point;
  }
};

struct SimReport {
  std::string scenario;
  std::uint64_t seed = 0;
  double duration_s = 0.0;
  std::vector<RobotReport> robots;
  FoulCounts fouls;
  std::vector<FoulEvent> events;
  LatencyStats planner_latency;  // wall clock, not deterministic
  std::vector<TraceRow> trace;
};

// Messages on the world -> robot-stage topic.
struct VisionMsg {
  std::shared_ptr<const VisionSnapshot> snapshot;
};
struct RefereeMsg {
  GameStateLeaf leaf;
  GameConstraints constraints;
};
using WorldMessage = std::variant<VisionMsg, RefereeMsg>;

/// Closed-loop run of one scenario.
class Simulator {
 public:
  explicit Simulator(Scenario scenario)
      : scenario_(std::move(scenario)),
        world_(makeWorld(scenario_)),
        fouls_(FoulConfig{scenario_.sim.crash_speed, scenario_.sim.foul_debounce_s,
                          scenario_.sim.defense_foul_margin,
                          scenario_.constraint_defaults.ball_keepout}) {
    if (!(scenario_.dt > 0.0) || !(scenario_.duration_s > 0.0)) {
      throw std::invalid_argument("Simulator: dt and duration must be > 0");
    }
    scenario_.search.validate();
    stages_.reserve(scenario_.robots.size());
    for (std::size_t i = 0; i < scenario_.robots.size(); ++i) {
      stages_.push_back(std::make_unique<RobotStage>());
      RobotStage &st = *stages_.back();
      st.index = i;
      topic_.connect(st.inbox);
      // The initial placement is known before the first frame arrives.
      const RobotState &s0 = scenario_.robots[i].start;
      st.frame = VisionFrame{0.0, s0.position, s0.heading, s0.velocity};
      st.constraints = constraintsFor(st.leaf, scenario_.constraint_defaults);
    }
    report_.scenario = scenario_.name;
    report_.seed = scenario_.seed;
    report_.duration_s = scenario_.duration_s;
    for (const RobotSpec &r : scenario_.robots) {
      RobotReport rr;
      rr.id = r.id;
      report_.robots.push_back(rr);
    }
    recordClearance(true);
  }

  const World &world() const { return world_; }
  const GameStateLeaf &leaf() const { return leaf_; }

  /// Runs to the scenario duration and returns the report.
  SimReport run() {
    const auto ticks = static_cast<std::int64_t>(std::llround(scenario_.duration_s / scenario_.dt));
    for (std::int64_t k = 0; k < ticks; ++k) tick();
    for (std::size_t i = 0; i < world_.bodies.size(); ++i) {
      report_.robots[i].final_state = world_.bodies[i].state;
      report_.robots[i].plans = stages_[i]->plans;
    }
    report_.planner_latency = latencyStats(latency_ms_);
    return report_;
  }

  void tick() {
    const double now = world_.time;
    publishReferee(now);
    publishVision(now);
    for (auto &st : stages_) consumeInbox(*st);

    // Estimates first: every robot's plan sees the others' estimates.
    std::vector<RobotState> estimates;
    estimates.reserve(stages_.size());
    for (auto &st : stages_) {
      const auto log = st->log.snapshot(st->frame->t_capture);
      estimates.push_back(predictCurrentState(*st->frame, log, now));
    }
    planRobots(now, estimates);

    for (std::size_t i = 0; i < stages_.size(); ++i) {
      RobotStage &st = *stages_[i];
      const VelocityCommand cmd = limitAcceleration(navigate(st, estimates[i], now), estimates[i],
                                                    scenario_.robots[i].limits, scenario_.dt);
      st.log.push(now, cmd.twist());
      world_.bodies[i].command = cmd;
    }

    advance(world_, scenario_.dt, static_cast<double>(++tick_count_) * scenario_.dt);

    for (const FoulEvent &e : fouls_.detect(world_, leaf_)) {
      report_.events.push_back(e);
      switch (e.kind) {
        case FoulKind::kBotCrashUnique: ++report_.fouls.bot_crash_unique; break;
        case FoulKind::kAttackerTooCloseToDefenseArea:
          ++report_.fouls.attacker_too_close_to_defense_area;
          break;
        case FoulKind::kDefenderTooCloseToKickPoint:
          ++report_.fouls.defender_too_close_to_kick_point;
          break;
      }
    }
    recordClearance(false);
    for (std::size_t i = 0; i < stages_.size(); ++i) recordMetrics(i, now, estimates[i]);
  }

 private:
  struct RobotStage {
    std::size_t index = 0;
    Inbox<WorldMessage> inbox;
    Mailbox<PlanResult> plan_box;
    CommandLog log{1024};
    std::optional<VisionFrame> frame;
    std::shared_ptr<const VisionSnapshot> view;  // latest delivered frame
    bool fresh_frame = false;
    GameStateLeaf leaf = GameTactic{};
    GameConstraints constraints;
    std::optional<PlanResult> plan;
    double plan_time = 0.0;
    std::size_t script_step = 0;
    bool replan = true;
    int plans = 0;
  };

  const ScriptStep &activeStep(const RobotStage &st) const {
    return scenario_.robots[st.index].script[st.script_step];
  }

  void publishReferee(double now) {
    bool changed = false;
    while (next_event_ < scenario_.referee.size() &&
           scenario_.referee[next_event_].t <= now + 1e-9) {
      leaf_ = parse(scenario_.referee[next_event_].input, leaf_);
      ++next_event_;
      changed = true;
    }
    if (changed) {
      topic_.publish(RefereeMsg{leaf_, constraintsFor(leaf_, scenario_.constraint_defaults)});
    }
  }

  void publishVision(double now) {
    while (!world_.in_flight.empty() && world_.in_flight.front().deliver_at <= now + 1e-9) {
      topic_.publish(VisionMsg{std::make_shared<const VisionSnapshot>(
          std::move(world_.in_flight.front()))});
      world_.in_flight.pop_front();
    }
  }

  void consumeInbox(RobotStage &st) {
    for (WorldMessage &msg : st.inbox.drain()) {
      std::visit(Overloaded{
                     [&](VisionMsg &m) {
                       const RobotState &s = m.snapshot->robots[st.index];
                       st.frame = VisionFrame{m.snapshot->t_capture, s.position, s.heading,
                                              s.velocity};
                       st.view = m.snapshot;
                       st.fresh_frame = true;
                     },
                     [&](RefereeMsg &m) {
                       st.leaf = m.leaf;
                       st.constraints = m.constraints;
                       st.replan = true;
                     },
                 },
                 msg);
    }
  }

  MotionLimits cappedLimits(const RobotStage &st) const {
    MotionLimits l = scenario_.robots[st.index].limits;
    if (st.constraints.speed_cap && *st.constraints.speed_cap > 0.0) {
      l.v_max = std::min(l.v_max, *st.constraints.speed_cap);
    }
    return l;
  }

  PlanRequest buildRequest(const RobotStage &st, double now,
                           const std::vector<RobotState> &estimates) const {
    const RobotSpec &spec = scenario_.robots[st.index];
    PlanRequest req;
    req.start = estimates[st.index];
    req.target = activeStep(st).nav.point;
    req.limits = spec.limits;
    req.previous = st.plan;
    req.constraints = st.constraints;
    req.field = scenario_.field;
    req.ball = scenario_.ball;
    req.robot_radius = world_.robot_radius;
    req.goalkeeper = spec.goalkeeper;
    const double horizon = scenario_.sim.moving_obstacle_horizon;
    if (st.view) {
      const double age = now - st.view->t_capture;
      for (const Obstacle &o : st.view->obstacles) {
        if (const auto *m = std::get_if<MovingDisc>(&o)) {
          req.obstacles.push_back(
              MovingDisc{m->centerAt(age), m->radius, m->velocity, horizon});
        } else {
          req.obstacles.push_back(o);
        }
      }
    } else {
      req.obstacles = scenario_.obstacles;
    }
    for (std::size_t j = 0; j < estimates.size(); ++j) {
      if (j == st.index) continue;
      req.obstacles.push_back(
          MovingDisc{estimates[j].position, world_.robot_radius, estimates[j].velocity, horizon});
    }
    return req;
  }

  void planRobots(double now, const std::vector<RobotState> &estimates) {
    std::vector<std::size_t> due;
    for (auto &st : stages_) {
      // Script progression.
      const auto &script = scenario_.robots[st->index].script;
      while (st->script_step + 1 < script.size() && script[st->script_step + 1].t <= now + 1e-9) {
        ++st->script_step;
        st->replan = true;
        st->plan.reset();
      }
      const bool follows = activeStep(*st).nav.kind == NavKind::kFollowTrajectory;
      const bool halted = std::holds_alternative<HaltLeaf>(st->leaf);
      if (follows && !halted && (st->fresh_frame || st->replan || !st->plan)) {
        due.push_back(st->index);
      }
      st->fresh_frame = false;
    }
    if (due.empty()) return;

    struct Job {
      PlanResult result;
      double ms = 0.0;
    };
    auto work = [this, now, &estimates](std::size_t i) {
      const PlanRequest req = buildRequest(*stages_[i], now, estimates);
      SearchConfig cfg = scenario_.search;
      cfg.seed = scenario_.seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(i) + 1));
      const auto t0 = std::chrono::steady_clock::now();
      Job job{plan(req, cfg), 0.0};
      job.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      return job;
    };

    std::vector<Job> jobs(due.size());
    if (scenario_.sim.parallel && due.size() > 1) {
      std::vector<std::future<Job>> futures;
      futures.reserve(due.size());
      for (std::size_t i : due) futures.push_back(std::async(std::launch::async, work, i));
      for (std::size_t k = 0; k < due.size(); ++k) jobs[k] = futures[k].get();
    } else {
      for (std::size_t k = 0; k < due.size(); ++k) jobs[k] = work(due[k]);
    }
    for (std::size_t k = 0; k < due.size(); ++k) {
      RobotStage &st = *stages_[due[k]];
      st.plan_box.publish(std::move(jobs[k].result));
      latency_ms_.push_back(jobs[k].ms);
    }
  }

  VelocityCommand navigate(RobotStage &st, const RobotState &est, double now) {
    if (auto fresh = st.plan_box.consume()) {
      st.plan = std::move(*fresh);
      st.plan_time = now;
      st.replan = false;
      ++st.plans;
    }
    if (std::holds_alternative<HaltLeaf>(st.leaf)) {
      st.plan.reset();
      return {};
    }
    const NavTarget &nav = activeStep(st).nav;
    const MotionLimits limits = cappedLimits(st);
    const NavGains &gains = scenario_.gains;
    switch (nav.kind) {
      case NavKind::kRotateOnSelf:
        return rotateOnSelf(est, nav.orientation, limits, gains);
      case NavKind::kDriveToPoint:
        return driveToPoint(est, nav.point, nav.orientation, limits, gains);
      case NavKind::kRotateInPoint:
        return rotateInPoint(est, nav.pivot, nav.radius, nav.tangential_speed, limits, gains);
      case NavKind::kFollowTrajectory:
        if (!st.plan) return {};
        return followTrajectory(est, *st.plan, now - st.plan_time, nav.orientation, limits, gains,
                                scenario_.dt);
    }
    return {};
  }

  void recordClearance(bool initial) {
    for (std::size_t i = 0; i < world_.bodies.size(); ++i) {
      double c = world_.bodies[i].step_clearance;
      if (initial) {
        c = std::numeric_limits<double>::infinity();
        const Vec2 p = world_.bodies[i].state.position;
        for (const Obstacle &o : world_.obstacles) {
          if (isPhysical(o)) c = std::min(c, distanceToObstacle(p, o, 0.0) - world_.robot_radius);
        }
        for (std::size_t j = 0; j < world_.bodies.size(); ++j) {
          if (j != i) {
            c = std::min(c, (p - world_.bodies[j].state.position).norm() - 2.0 * world_.robot_radius);
          }
        }
      }
      report_.robots[i].min_clearance = std::min(report_.robots[i].min_clearance, c);
    }
  }

  void recordMetrics(std::size_t i, double t_cmd, const RobotState &est) {
    const Body &b = world_.bodies[i];
    RobotReport &rr = report_.robots[i];
    rr.max_speed = std::max(rr.max_speed, b.state.velocity.norm());

    // The estimate was made for t_cmd, before the step.
    const RobotState &truth_then = trace_prev_.size() > i ? trace_prev_[i] : scenario_.robots[i].start;
    rr.max_estimator_position_error =
        std::max(rr.max_estimator_position_error, (est.position - truth_then.position).norm());
    rr.max_estimator_heading_error = std::max(
        rr.max_estimator_heading_error, std::abs(wrapAngle(est.heading - truth_then.heading)));

    report_.trace.push_back({t_cmd, b.id, truth_then, est, b.command});
    if (trace_prev_.size() <= i) trace_prev_.resize(world_.bodies.size());
    trace_prev_[i] = b.state;

    const RobotStage &st = *stages_[i];
    const auto &script = scenario_.robots[i].script;
    const ScriptStep &last = script.back();
    const bool has_goal =
        last.nav.kind == NavKind::kFollowTrajectory || last.nav.kind == NavKind::kDriveToPoint;
    if (!rr.completion_time && has_goal && st.script_step + 1 == script.size() &&
        (b.state.position - last.nav.point).norm() <= scenario_.sim.completion_tolerance &&
        b.state.velocity.norm() <= scenario_.sim.completion_speed) {
      rr.completion_time = world_.time;
    }
  }

  Scenario scenario_;
  World world_;
  FoulDetector fouls_;
  Topic<WorldMessage> topic_;
  std::vector<std::unique_ptr<RobotStage>> stages_;
  GameStateLeaf leaf_ = GameTactic{};  // running play until the first referee event
  std::size_t next_event_ = 0;
  std::int64_t tick_count_ = 0;
  std::vector<double> latency_ms_;
  std::vector<RobotState> trace_prev_;
  SimReport report_;
};

/// Full closed-loop run.
inline SimReport run(const Scenario &scenario) { return Simulator(scenario).run(); }

namespace detail {

inline nlohmann::ordered_json stateJson(const RobotState &s) {
  return {{"position", {s.position.x, s.position.y}},
          {"velocity", {s.velocity.x, s.velocity.y}},
          {"heading", s.heading},
          {"angular_velocity", s.angular_velocity}};
}

}  // namespace detail

/// Structured report. Wall-clock latency is left out unless asked for, so
/// that equal seeds give byte-identical reports.
inline nlohmann::ordered_json reportJson(const SimReport &r, bool include_timing = false) {
  nlohmann::ordered_json j;
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  j["duration_s"] = r.duration_s;
  j["fouls"] = {{"bot_crash_unique", r.fouls.bot_crash_unique},
                {"attacker_too_close_to_defense_area", r.fouls.attacker_too_close_to_defense_area},
                {"defender_too_close_to_kick_point", r.fouls.defender_too_close_to_kick_point}};
  auto robots = nlohmann::ordered_json::array();
  for (const RobotReport &rr : r.robots) {
    nlohmann::ordered_json jr;
    jr["id"] = rr.id;
    jr["completion_time"] = rr.completion_time ? nlohmann::ordered_json(*rr.completion_time)
                                               : nlohmann::ordered_json(nullptr);
    jr["min_clearance"] = std::isfinite(rr.min_clearance) ? nlohmann::ordered_json(rr.min_clearance)
                                                          : nlohmann::ordered_json(nullptr);
    jr["max_speed"] = rr.max_speed;
    jr["max_estimator_position_error"] = rr.max_estimator_position_error;
    jr["max_estimator_heading_error"] = rr.max_estimator_heading_error;
    jr["plans"] = rr.plans;
    jr["final_state"] = detail::stateJson(rr.final_state);
    robots.push_back(jr);
  }
  j["robots"] = robots;
  auto events = nlohmann::ordered_json::array();
  for (const FoulEvent &e : r.events) {
    events.push_back({{"t", e.t}, {"kind", toString(e.kind)}, {"robot", e.robot}, {"other", e.other}});
  }
  j["foul_events"] = events;
  if (include_timing) {
    j["planner_latency_ms"] = {{"samples", r.planner_latency.samples},
                               {"median", r.planner_latency.median_ms},
                               {"p95", r.planner_latency.p95_ms},
                               {"p99", r.planner_latency.p99_ms},
                               {"max", r.planner_latency.max_ms}};
  }
  return j;
}

/// One line per robot per tick, whitespace separated, header first.
inline void writeTrace(std::ostream &os, const SimReport &r) {
  os << "# t id x y heading vx vy omega est_x est_y est_heading cmd_vx cmd_vy cmd_omega\n";
  char buf[320];
  for (const TraceRow &row : r.trace) {
    std::snprintf(buf, sizeof(buf),
                  "%.4f %d %.6f %.6f %.6f %.6f %.6f %.6f %.6f %.6f %.6f %.6f %.6f %.6f\n", row.t,
                  row.id, row.truth.position.x, row.truth.position.y, row.truth.heading,
                  row.truth.velocity.x, row.truth.velocity.y, row.truth.angular_velocity,
                  row.estimate.position.x, row.estimate.position.y, row.estimate.heading,
                  row.command.vx, row.command.vy, row.command.omega);
    os << buf;
  }
}

}  // namespace sslm

#endif  // SSLMOTION_HARNESS_SIM_HPP_
