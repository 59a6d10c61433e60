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

// Referee parser tree.
//
// Three levels turn (command, stage, ball_moved, previous leaf) into one
// game-state leaf:
//   game action   -> must the robots halt?
//   game status   -> in-game or positioning (restart preparation, stop)?
//   planning game -> DynamicFormation (move, never touch the ball),
//                    PlannedTactic (set play), GameTactic (normal play).

#ifndef SSLMOTION_REFPARSER_HPP_
#define SSLMOTION_REFPARSER_HPP_

#include <array>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sslmotion/world.hpp"

namespace sslm {

enum class RefCommand {
  kHalt,
  kStop,
  kForceStart,
  kNormalStart,
  kPrepareKickoffUs,
  kPrepareKickoffThem,
  kPreparePenaltyUs,
  kPreparePenaltyThem,
  kDirectFreeUs,
  kDirectFreeThem,
  kBallPlacementUs,
  kBallPlacementThem,
  kTimeoutUs,
  kTimeoutThem,
};

enum class RefStage {
  kFirstHalfPre,
  kFirstHalf,
  kHalfTime,
  kSecondHalfPre,
  kSecondHalf,
  kOvertimePre,
  kOvertimeFirstHalf,
  kOvertimeSecondHalf,
  kPenaltyShootout,
  kPostGame,
};

inline constexpr std::array<std::string_view, 14> kCommandNames = {
    "Halt",           "Stop",           "ForceStart",         "NormalStart",
    "PrepareKickoffUs", "PrepareKickoffThem", "PreparePenaltyUs", "PreparePenaltyThem",
    "DirectFreeUs",   "DirectFreeThem", "BallPlacementUs",    "BallPlacementThem",
    "TimeoutUs",      "TimeoutThem"};

inline constexpr std::array<std::string_view, 10> kStageNames = {
    "FirstHalfPre",      "FirstHalf",          "HalfTime",        "SecondHalfPre", "SecondHalf",
    "OvertimePre",       "OvertimeFirstHalf",  "OvertimeSecondHalf", "PenaltyShootout",
    "PostGame"};

inline std::string_view toString(RefCommand c) { return kCommandNames[static_cast<std::size_t>(c)]; }
inline std::string_view toString(RefStage s) { return kStageNames[static_cast<std::size_t>(s)]; }

inline std::optional<RefCommand> parseCommandName(std::string_view name) {
  for (std::size_t i = 0; i < kCommandNames.size(); ++i) {
    if (kCommandNames[i] == name) return static_cast<RefCommand>(i);
  }
  return std::nullopt;
}
inline std::optional<RefStage> parseStageName(std::string_view name) {
  for (std::size_t i = 0; i < kStageNames.size(); ++i) {
    if (kStageNames[i] == name) return static_cast<RefStage>(i);
  }
  return std::nullopt;
}

/// Commands are already relative to our team (Us/Them).
struct RefereeInput {
  RefCommand command = RefCommand::kHalt;
  RefStage stage = RefStage::kFirstHalfPre;
  bool ball_moved = false;  // ball left its restart spot (> 5 cm)
};

// Leaves of the tree.
struct HaltLeaf {
  bool operator==(const HaltLeaf &) const = default;
};

enum class FormationReason {
  kStop,
  kBallPlacementUs,
  kBallPlacementThem,
  kPrepareKickoffUs,
  kPrepareKickoffThem,
  kPreparePenaltyUs,
  kPreparePenaltyThem,
  kTheirFreeKick,
};
struct DynamicFormation {
  FormationReason reason = FormationReason::kStop;
  bool operator==(const DynamicFormation &) const = default;
};

enum class PlannedPlay { kKickoffUs, kPenaltyUs, kFreeKickUs };
struct PlannedTactic {
  PlannedPlay play = PlannedPlay::kKickoffUs;
  bool operator==(const PlannedTactic &) const = default;
};

enum class GameMode { kNormal, kTheirRestartAvoidance };
struct GameTactic {
  GameMode mode = GameMode::kNormal;
  bool operator==(const GameTactic &) const = default;
};

using GameStateLeaf = std::variant<HaltLeaf, DynamicFormation, PlannedTactic, GameTactic>;

inline std::string toString(const GameStateLeaf &leaf) {
  struct Visitor {
    std::string operator()(const HaltLeaf &) const { return "Halt"; }
    std::string operator()(const DynamicFormation &f) const {
      constexpr std::array<const char *, 8> kNames = {
          "stop",           "ball_placement_us",    "ball_placement_them",
          "prepare_kickoff_us", "prepare_kickoff_them", "prepare_penalty_us",
          "prepare_penalty_them", "their_free_kick"};
      return std::string("DynamicFormation/") + kNames[static_cast<std::size_t>(f.reason)];
    }
    std::string operator()(const PlannedTactic &p) const {
      constexpr std::array<const char *, 3> kNames = {"kickoff_us", "penalty_us", "freekick_us"};
      return std::string("PlannedTactic/") + kNames[static_cast<std::size_t>(p.play)];
    }
    std::string operator()(const GameTactic &g) const {
      return g.mode == GameMode::kNormal ? "GameTactic/normal"
                                         : "GameTactic/their_restart_avoidance";
    }
  };
  return std::visit(Visitor{}, leaf);
}

/// Every distinct leaf value; used for exhaustive checks.
inline std::vector<GameStateLeaf> allLeaves() {
  std::vector<GameStateLeaf> out = {HaltLeaf{}};
  for (int r = 0; r <= static_cast<int>(FormationReason::kTheirFreeKick); ++r) {
    out.emplace_back(DynamicFormation{static_cast<FormationReason>(r)});
  }
  for (int p = 0; p <= static_cast<int>(PlannedPlay::kFreeKickUs); ++p) {
    out.emplace_back(PlannedTactic{static_cast<PlannedPlay>(p)});
  }
  out.emplace_back(GameTactic{GameMode::kNormal});
  out.emplace_back(GameTactic{GameMode::kTheirRestartAvoidance});
  return out;
}

namespace detail {

inline bool isBreakStage(RefStage s) {
  return s == RefStage::kHalfTime || s == RefStage::kPostGame;
}

inline bool isFormation(const GameStateLeaf &leaf, FormationReason r) {
  const auto *f = std::get_if<DynamicFormation>(&leaf);
  return f != nullptr && f->reason == r;
}

/// NormalStart resolves the pending restart.
inline GameStateLeaf normalStart(const GameStateLeaf &previous, bool ball_moved) {
  if (isFormation(previous, FormationReason::kPrepareKickoffThem) ||
      isFormation(previous, FormationReason::kPreparePenaltyThem)) {
    return GameTactic{GameMode::kTheirRestartAvoidance};
  }
  if (const auto *g = std::get_if<GameTactic>(&previous)) return *g;
  if (ball_moved) return GameTactic{GameMode::kNormal};
  if (isFormation(previous, FormationReason::kPrepareKickoffUs)) {
    return PlannedTactic{PlannedPlay::kKickoffUs};
  }
  if (isFormation(previous, FormationReason::kPreparePenaltyUs)) {
    return PlannedTactic{PlannedPlay::kPenaltyUs};
  }
  if (const auto *p = std::get_if<PlannedTactic>(&previous)) return *p;
  return GameTactic{GameMode::kNormal};
}

}  // namespace detail

/// Total: every input maps to exactly one leaf.
inline GameStateLeaf parse(const RefereeInput &in, const GameStateLeaf &previous) {
  // Game action.
  if (in.command == RefCommand::kHalt || in.command == RefCommand::kTimeoutUs ||
      in.command == RefCommand::kTimeoutThem || detail::isBreakStage(in.stage)) {
    return HaltLeaf{};
  }
  // Game status and planning game.
  switch (in.command) {
    case RefCommand::kStop:
      return DynamicFormation{FormationReason::kStop};
    case RefCommand::kBallPlacementUs:
      return DynamicFormation{FormationReason::kBallPlacementUs};
    case RefCommand::kBallPlacementThem:
      return DynamicFormation{FormationReason::kBallPlacementThem};
    case RefCommand::kPrepareKickoffUs:
      return DynamicFormation{FormationReason::kPrepareKickoffUs};
    case RefCommand::kPrepareKickoffThem:
      return DynamicFormation{FormationReason::kPrepareKickoffThem};
    case RefCommand::kPreparePenaltyUs:
      return DynamicFormation{FormationReason::kPreparePenaltyUs};
    case RefCommand::kPreparePenaltyThem:
      return DynamicFormation{FormationReason::kPreparePenaltyThem};
    case RefCommand::kDirectFreeThem:
      if (in.ball_moved) return GameTactic{GameMode::kTheirRestartAvoidance};
      return DynamicFormation{FormationReason::kTheirFreeKick};
    case RefCommand::kDirectFreeUs:
      if (in.ball_moved) return GameTactic{GameMode::kNormal};
      return PlannedTactic{PlannedPlay::kFreeKickUs};
    case RefCommand::kForceStart:
      return GameTactic{GameMode::kNormal};
    case RefCommand::kNormalStart:
      return detail::normalStart(previous, in.ball_moved);
    case RefCommand::kHalt:
    case RefCommand::kTimeoutUs:
    case RefCommand::kTimeoutThem:
      break;
  }
  return HaltLeaf{};
}

/// Tunable numbers behind the leaf -> constraints mapping.
struct ConstraintDefaults {
  double stop_speed_cap = 1.5;  // m/s
  double ball_keepout = 0.5;    // m
};

inline GameConstraints constraintsFor(const GameStateLeaf &leaf,
                                      const ConstraintDefaults &defaults = {}) {
  struct Visitor {
    const ConstraintDefaults &d;
    GameConstraints operator()(const HaltLeaf &) const {
      return {.speed_cap = 0.0, .ball_keepout = std::nullopt, .defense_keepout_active = true,
              .may_touch_ball = false};
    }
    GameConstraints operator()(const DynamicFormation &) const {
      return {.speed_cap = d.stop_speed_cap, .ball_keepout = d.ball_keepout,
              .defense_keepout_active = true, .may_touch_ball = false};
    }
    GameConstraints operator()(const PlannedTactic &) const {
      return {.speed_cap = std::nullopt, .ball_keepout = std::nullopt,
              .defense_keepout_active = true, .may_touch_ball = true};
    }
    GameConstraints operator()(const GameTactic &g) const {
      if (g.mode == GameMode::kTheirRestartAvoidance) {
        return {.speed_cap = std::nullopt, .ball_keepout = d.ball_keepout,
                .defense_keepout_active = true, .may_touch_ball = false};
      }
      return {.speed_cap = std::nullopt, .ball_keepout = std::nullopt,
              .defense_keepout_active = true, .may_touch_ball = true};
    }
  };
  return std::visit(Visitor{defaults}, leaf);
}

struct RefereeEvent {
  double t = 0.0;
  RefereeInput input;
};

/// Replay format: one event per line, `t command stage ball_moved`, with
/// ball_moved as 0/1. `#` starts a comment.
inline std::vector<RefereeEvent> loadRefereeLog(std::istream &is) {
  std::vector<RefereeEvent> out;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string &what) {
    throw std::runtime_error("referee log line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(is, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string t_text;
    if (!(ls >> t_text)) continue;
    RefereeEvent ev;
    try {
      std::size_t used = 0;
      ev.t = std::stod(t_text, &used);
      if (used != t_text.size()) fail("bad time `" + t_text + "`");
    } catch (const std::logic_error &) {
      fail("bad time `" + t_text + "`");
    }
    std::string command;
    std::string stage;
    int moved = -1;
    std::string extra;
    if (!(ls >> command >> stage >> moved) || (ls >> extra)) {
      fail("expected `t command stage ball_moved`");
    }
    const auto c = parseCommandName(command);
    if (!c) fail("unknown command `" + command + "`");
    const auto s = parseStageName(stage);
    if (!s) fail("unknown stage `" + stage + "`");
    if (moved != 0 && moved != 1) fail("ball_moved must be 0 or 1");
    if (!out.empty() && ev.t < out.back().t) fail("timestamps must be non-decreasing");
    ev.input = {*c, *s, moved == 1};
    out.push_back(ev);
  }
  return out;
}

/// Leaf after each event, starting from Halt; one `t leaf` line per event.
inline void writeLeafTimeline(std::ostream &os, const std::vector<RefereeEvent> &events) {
  GameStateLeaf leaf = HaltLeaf{};
  char buf[32];
  for (const RefereeEvent &ev : events) {
    leaf = parse(ev.input, leaf);
    std::snprintf(buf, sizeof(buf), "%.3f", ev.t);
    os << buf << ' ' << toString(leaf) << '\n';
  }
}

}  // namespace sslm

#endif  // SSLMOTION_REFPARSER_HPP_
