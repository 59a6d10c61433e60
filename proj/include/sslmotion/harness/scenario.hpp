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

// Scenario description and its JSON schema (see docs/scenario-format.md).

#ifndef SSLMOTION_HARNESS_SCENARIO_HPP_
#define SSLMOTION_HARNESS_SCENARIO_HPP_

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sslmotion/navigation.hpp"
#include "sslmotion/planner.hpp"
#include "sslmotion/refparser.hpp"
#include "sslmotion/world.hpp"

namespace sslm {

/// Malformed scenario; `field()` is the JSON path of the offending value.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string field, const std::string &what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string &field() const { return field_; }

 private:
  std::string field_;
};

struct ScriptStep {
  double t = 0.0;
  NavTarget nav;
};

struct RobotSpec {
  int id = 0;
  RobotState start;
  MotionLimits limits;
  bool goalkeeper = false;
  std::vector<ScriptStep> script;  // ordered by t
};

struct VisionConfig {
  double rate_hz = 60.0;
  double latency_s = 0.1;
};

/// Referee-independent simulation knobs.
struct SimConfig {
  double crash_speed = 1.5;             // m/s closing speed
  double foul_debounce_s = 1.0;
  double defense_foul_margin = 0.0;     // m beyond the robot edge
  double moving_obstacle_horizon = 1.0; // s, for planner predictions
  double completion_tolerance = 0.005;  // m
  double completion_speed = 0.05;       // m/s
  int clearance_substeps = 10;
  bool parallel = true;
};

struct Scenario {
  std::string name = "unnamed";
  FieldGeometry field;
  std::vector<RobotSpec> robots;
  std::vector<Obstacle> obstacles;  // moving discs move in the world too
  std::optional<Vec2> ball;
  std::vector<RefereeEvent> referee;
  VisionConfig vision;
  double duration_s = 5.0;
  double dt = 0.005;
  std::uint64_t seed = 1;
  SearchConfig search;
  NavGains gains;
  SimConfig sim;
  ConstraintDefaults constraint_defaults;
};

namespace detail {

using Json = nlohmann::json;

class JsonReader {
 public:
  JsonReader(const Json &j, std::string path) : j_(j), path_(std::move(path)) {}

  const std::string &path() const { return path_; }
  [[noreturn]] void fail(const std::string &what) const { throw ScenarioError(path_, what); }

  bool has(const char *key) const { return j_.is_object() && j_.contains(key); }
  JsonReader at(const char *key) const {
    if (!j_.is_object()) fail("expected an object");
    if (!j_.contains(key)) throw ScenarioError(child(key), "missing required field");
    return {j_.at(key), child(key)};
  }
  JsonReader at(std::size_t i) const { return {j_.at(i), path_ + "[" + std::to_string(i) + "]"}; }
  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  double positive() const {
    const double v = number();
    if (!(v > 0.0)) fail("must be > 0");
    return v;
  }
  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::int64_t integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<std::int64_t>();
  }
  Vec2 vec2() const {
    if (!j_.is_array() || j_.size() != 2 || !j_[0].is_number() || !j_[1].is_number()) {
      fail("expected [x, y]");
    }
    const double x = j_[0].get<double>();
    const double y = j_[1].get<double>();
    if (!std::isfinite(x) || !std::isfinite(y)) fail("expected finite [x, y]");
    return {x, y};
  }

  double numberOr(const char *key, double fallback) const {
    return has(key) ? at(key).number() : fallback;
  }
  double positiveOr(const char *key, double fallback) const {
    return has(key) ? at(key).positive() : fallback;
  }
  bool boolOr(const char *key, bool fallback) const { return has(key) ? at(key).boolean() : fallback; }

 private:
  std::string child(const char *key) const { return path_.empty() ? key : path_ + "." + key; }

  const Json &j_;
  std::string path_;
};

inline MotionLimits readLimits(const JsonReader &r) {
  MotionLimits l;
  l.v_max = r.positiveOr("v_max", l.v_max);
  l.a_max = r.positiveOr("a_max", l.a_max);
  l.omega_max = r.positiveOr("omega_max", l.omega_max);
  l.alpha_max = r.positiveOr("alpha_max", l.alpha_max);
  return l;
}

inline RobotState readState(const JsonReader &r) {
  RobotState s;
  s.position = r.at("position").vec2();
  if (r.has("velocity")) s.velocity = r.at("velocity").vec2();
  s.heading = wrapAngle(r.numberOr("heading", 0.0));
  s.angular_velocity = r.numberOr("angular_velocity", 0.0);
  return s;
}

inline NavTarget readNav(const JsonReader &r) {
  NavTarget n;
  const std::string kind = r.at("kind").string();
  if (kind == "follow_trajectory") {
    n.kind = NavKind::kFollowTrajectory;
    n.point = r.at("point").vec2();
    n.orientation = r.numberOr("heading", 0.0);
  } else if (kind == "drive_to_point") {
    n.kind = NavKind::kDriveToPoint;
    n.point = r.at("point").vec2();
    n.orientation = r.numberOr("heading", 0.0);
  } else if (kind == "rotate_on_self") {
    n.kind = NavKind::kRotateOnSelf;
    n.orientation = r.at("heading").number();
  } else if (kind == "rotate_in_point") {
    n.kind = NavKind::kRotateInPoint;
    n.pivot = r.at("pivot").vec2();
    n.radius = r.at("radius").positive();
    n.tangential_speed = r.numberOr("tangential_speed", 0.0);
  } else {
    r.at("kind").fail("unknown navigation kind `" + kind + "`");
  }
  return n;
}

inline Obstacle readObstacle(const JsonReader &r) {
  const std::string type = r.at("type").string();
  Obstacle o;
  if (type == "static_disc") {
    o = StaticDisc{r.at("center").vec2(), r.at("radius").positive()};
  } else if (type == "moving_disc") {
    o = MovingDisc{r.at("center").vec2(), r.at("radius").positive(),
                   r.has("velocity") ? r.at("velocity").vec2() : Vec2{},
                   r.has("horizon") ? r.at("horizon").positive() : 1e9};
  } else if (type == "rect") {
    const Rect rect{r.at("min").vec2(), r.at("max").vec2()};
    if (!(rect.min.x < rect.max.x && rect.min.y < rect.max.y)) {
      r.at("max").fail("rect max must exceed min componentwise");
    }
    o = rect;
  } else if (type == "keep_out_disc") {
    o = KeepOutDisc{r.at("center").vec2(), r.at("radius").positive(), r.boolOr("active", true)};
  } else {
    r.at("type").fail("unknown obstacle type `" + type + "`");
  }
  return o;
}

}  // namespace detail

inline Scenario scenarioFromJson(const nlohmann::json &root) {
  using detail::JsonReader;
  const JsonReader r(root, "");
  if (!root.is_object()) r.fail("scenario must be a JSON object");
  Scenario s;
  if (r.has("name")) s.name = r.at("name").string();
  s.duration_s = r.at("duration_s").positive();
  s.dt = r.positiveOr("dt", s.dt);
  if (r.has("seed")) {
    const auto seed = r.at("seed").integer();
    if (seed < 0) r.at("seed").fail("must be >= 0");
    s.seed = static_cast<std::uint64_t>(seed);
  }

  if (r.has("field")) {
    const JsonReader f = r.at("field");
    s.field.length = f.positiveOr("length", s.field.length);
    s.field.width = f.positiveOr("width", s.field.width);
    s.field.defense_area_depth = f.positiveOr("defense_area_depth", s.field.defense_area_depth);
    s.field.defense_area_width = f.positiveOr("defense_area_width", s.field.defense_area_width);
    s.field.boundary_margin = f.positiveOr("boundary_margin", s.field.boundary_margin);
    try {
      s.field.validate();
    } catch (const std::invalid_argument &e) {
      f.fail(e.what());
    }
  }
  if (r.has("vision")) {
    const JsonReader v = r.at("vision");
    s.vision.rate_hz = v.positiveOr("rate_hz", s.vision.rate_hz);
    s.vision.latency_s = v.numberOr("latency_s", s.vision.latency_s);
    if (s.vision.latency_s < 0.0) v.at("latency_s").fail("must be >= 0");
  }
  if (r.has("ball")) s.ball = r.at("ball").vec2();
  if (r.has("search")) {
    const JsonReader c = r.at("search");
    s.search.check_dt = c.positiveOr("check_dt", s.search.check_dt);
    s.search.collision_penalty = c.numberOr("collision_penalty", s.search.collision_penalty);
    s.search.pass_radius = c.numberOr("pass_radius", s.search.pass_radius);
    if (c.has("max_candidates")) s.search.max_candidates = static_cast<int>(c.at("max_candidates").integer());
  }
  if (r.has("sim")) {
    const JsonReader c = r.at("sim");
    s.sim.crash_speed = c.positiveOr("crash_speed", s.sim.crash_speed);
    s.sim.foul_debounce_s = c.numberOr("foul_debounce_s", s.sim.foul_debounce_s);
    s.sim.parallel = c.boolOr("parallel", s.sim.parallel);
  }

  const JsonReader robots = r.at("robots");
  std::set<int> ids;
  for (std::size_t i = 0; i < robots.size(); ++i) {
    const JsonReader jr = robots.at(i);
    RobotSpec spec;
    spec.id = static_cast<int>(jr.at("id").integer());
    if (!ids.insert(spec.id).second) jr.at("id").fail("duplicate robot id");
    spec.start = detail::readState(jr.at("start"));
    if (jr.has("limits")) spec.limits = detail::readLimits(jr.at("limits"));
    spec.goalkeeper = jr.boolOr("goalkeeper", false);
    if (jr.has("target")) {
      const JsonReader t = jr.at("target");
      NavTarget nav;
      nav.kind = NavKind::kFollowTrajectory;
      nav.point = t.at("position").vec2();
      nav.orientation = t.numberOr("heading", 0.0);
      spec.script.push_back({0.0, nav});
    }
    if (jr.has("script")) {
      const JsonReader sc = jr.at("script");
      for (std::size_t k = 0; k < sc.size(); ++k) {
        const JsonReader step = sc.at(k);
        const double t = step.numberOr("t", 0.0);
        if (!spec.script.empty() && t < spec.script.back().t) {
          step.at("t").fail("script steps must be ordered by t");
        }
        spec.script.push_back({t, detail::readNav(step)});
      }
    }
    if (spec.script.empty()) jr.fail("robot needs a `target` or a `script`");
    s.robots.push_back(std::move(spec));
  }
  if (s.robots.empty()) robots.fail("at least one robot is required");

  if (r.has("obstacles")) {
    const JsonReader obs = r.at("obstacles");
    for (std::size_t i = 0; i < obs.size(); ++i) s.obstacles.push_back(detail::readObstacle(obs.at(i)));
  }
  if (r.has("referee")) {
    const JsonReader ref = r.at("referee");
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const JsonReader e = ref.at(i);
      RefereeEvent ev;
      ev.t = e.at("t").number();
      const std::string command = e.at("command").string();
      const auto c = parseCommandName(command);
      if (!c) e.at("command").fail("unknown command `" + command + "`");
      const std::string stage = e.at("stage").string();
      const auto st = parseStageName(stage);
      if (!st) e.at("stage").fail("unknown stage `" + stage + "`");
      ev.input = {*c, *st, e.boolOr("ball_moved", false)};
      if (!s.referee.empty() && ev.t < s.referee.back().t) e.at("t").fail("events must be ordered by t");
      s.referee.push_back(ev);
    }
  }
  return s;
}

inline Scenario scenarioFromString(const std::string &text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ScenarioError("<document>", std::string("invalid JSON: ") + e.what());
  }
  return scenarioFromJson(j);
}

inline Scenario loadScenario(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("<file>", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return scenarioFromString(buf.str());
}

}  // namespace sslm

#endif  // SSLMOTION_HARNESS_SCENARIO_HPP_
