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


#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gtest/gtest.h"
#include "sslmotion/refparser.hpp"

#ifndef SSLM_TEST_DATA_DIR
#error "SSLM_TEST_DATA_DIR must point at tests/data"
#endif

namespace sslm {
namespace {

constexpr int kCommands = 14;
constexpr int kStages = 10;

RefereeInput input(RefCommand c, RefStage s = RefStage::kFirstHalf, bool moved = false) {
  return {c, s, moved};
}

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(RefParser, Examples) {
  for (const GameStateLeaf &prev : allLeaves()) {
    for (int s = 0; s < kStages; ++s) {
      for (bool moved : {false, true}) {
        EXPECT_EQ(parse(input(RefCommand::kHalt, static_cast<RefStage>(s), moved), prev),
                  GameStateLeaf(HaltLeaf{}));
      }
    }
  }
  EXPECT_EQ(parse(input(RefCommand::kStop), HaltLeaf{}),
            GameStateLeaf(DynamicFormation{FormationReason::kStop}));
  EXPECT_EQ(parse(input(RefCommand::kNormalStart), DynamicFormation{FormationReason::kPrepareKickoffUs}),
            GameStateLeaf(PlannedTactic{PlannedPlay::kKickoffUs}));
  EXPECT_EQ(parse(input(RefCommand::kForceStart, RefStage::kSecondHalf), HaltLeaf{}),
            GameStateLeaf(GameTactic{GameMode::kNormal}));
}

TEST(RefParser, BallMovementEndsPlannedTactic) {
  const GameStateLeaf planned = PlannedTactic{PlannedPlay::kKickoffUs};
  EXPECT_EQ(parse(input(RefCommand::kNormalStart, RefStage::kFirstHalf, true), planned),
            GameStateLeaf(GameTactic{GameMode::kNormal}));
  EXPECT_EQ(parse(input(RefCommand::kDirectFreeUs, RefStage::kFirstHalf, true),
                  PlannedTactic{PlannedPlay::kFreeKickUs}),
            GameStateLeaf(GameTactic{GameMode::kNormal}));
}

TEST(RefParser, TheirRestarts) {
  const GameStateLeaf kick = parse(input(RefCommand::kDirectFreeThem), DynamicFormation{});
  EXPECT_EQ(kick, GameStateLeaf(DynamicFormation{FormationReason::kTheirFreeKick}));
  EXPECT_EQ(parse(input(RefCommand::kDirectFreeThem, RefStage::kFirstHalf, true), kick),
            GameStateLeaf(GameTactic{GameMode::kTheirRestartAvoidance}));
  EXPECT_EQ(parse(input(RefCommand::kNormalStart), DynamicFormation{FormationReason::kPrepareKickoffThem}),
            GameStateLeaf(GameTactic{GameMode::kTheirRestartAvoidance}));
  EXPECT_EQ(parse(input(RefCommand::kNormalStart), DynamicFormation{FormationReason::kPreparePenaltyThem}),
            GameStateLeaf(GameTactic{GameMode::kTheirRestartAvoidance}));
}

TEST(RefParser, TimeoutsAndBreaksHalt) {
  EXPECT_EQ(parse(input(RefCommand::kTimeoutUs), GameTactic{}), GameStateLeaf(HaltLeaf{}));
  EXPECT_EQ(parse(input(RefCommand::kForceStart, RefStage::kHalfTime), GameTactic{}),
            GameStateLeaf(HaltLeaf{}));
  EXPECT_EQ(parse(input(RefCommand::kStop, RefStage::kPostGame), GameTactic{}),
            GameStateLeaf(HaltLeaf{}));
}

TEST(RefParser, TotalAndIdempotent) {
  const auto leaves = allLeaves();
  const std::set<std::string> known = [&] {
    std::set<std::string> s;
    for (const auto &l : leaves) s.insert(toString(l));
    return s;
  }();
  int inputs = 0;
  for (int c = 0; c < kCommands; ++c) {
    for (int s = 0; s < kStages; ++s) {
      for (bool moved : {false, true}) {
        for (const GameStateLeaf &prev : leaves) {
          const RefereeInput in = input(static_cast<RefCommand>(c), static_cast<RefStage>(s), moved);
          GameStateLeaf out;
          ASSERT_NO_THROW(out = parse(in, prev));
          EXPECT_TRUE(known.count(toString(out)));
          EXPECT_EQ(parse(in, prev), out);  // pure
          const GameStateLeaf again = parse(in, out);
          EXPECT_EQ(again, out) << toString(prev) << " -> " << toString(out);
          ++inputs;
        }
      }
    }
  }
  EXPECT_EQ(inputs, kCommands * kStages * 2 * static_cast<int>(leaves.size()));
}

TEST(RefParser, NamesRoundTrip) {
  for (int c = 0; c < kCommands; ++c) {
    const auto cmd = static_cast<RefCommand>(c);
    EXPECT_EQ(parseCommandName(toString(cmd)), cmd);
  }
  for (int s = 0; s < kStages; ++s) {
    const auto st = static_cast<RefStage>(s);
    EXPECT_EQ(parseStageName(toString(st)), st);
  }
  EXPECT_FALSE(parseCommandName("STOP").has_value());
}

TEST(Constraints, PerLeaf) {
  const GameConstraints halt = constraintsFor(HaltLeaf{});
  ASSERT_TRUE(halt.speed_cap.has_value());
  EXPECT_EQ(*halt.speed_cap, 0.0);
  EXPECT_FALSE(halt.may_touch_ball);

  const GameConstraints stop = constraintsFor(DynamicFormation{FormationReason::kStop});
  EXPECT_EQ(stop.speed_cap.value(), 1.5);
  EXPECT_EQ(stop.ball_keepout.value(), 0.5);
  EXPECT_FALSE(stop.may_touch_ball);

  const GameConstraints normal = constraintsFor(GameTactic{GameMode::kNormal});
  EXPECT_FALSE(normal.speed_cap.has_value());
  EXPECT_TRUE(normal.may_touch_ball);
  EXPECT_TRUE(normal.defense_keepout_active);

  const GameConstraints avoid = constraintsFor(GameTactic{GameMode::kTheirRestartAvoidance});
  EXPECT_EQ(avoid.ball_keepout.value(), 0.5);
  EXPECT_FALSE(avoid.may_touch_ball);

  ConstraintDefaults custom;
  custom.stop_speed_cap = 1.0;
  EXPECT_EQ(constraintsFor(DynamicFormation{}, custom).speed_cap.value(), 1.0);
}

TEST(Constraints, CapsPositiveWhenPresentOutsideHalt) {
  for (const GameStateLeaf &leaf : allLeaves()) {
    const GameConstraints c = constraintsFor(leaf);
    if (std::holds_alternative<HaltLeaf>(leaf)) continue;
    if (c.speed_cap) {
      EXPECT_GT(*c.speed_cap, 0.0);
    }
    if (c.ball_keepout) {
      EXPECT_GT(*c.ball_keepout, 0.0);
    }
  }
}

TEST(RefereeLog, GoldenTimeline) {
  std::ifstream log(std::string(SSLM_TEST_DATA_DIR) + "/half_game.log");
  ASSERT_TRUE(log.good());
  std::ostringstream out;
  writeLeafTimeline(out, loadRefereeLog(log));
  EXPECT_EQ(out.str(), slurp(std::string(SSLM_TEST_DATA_DIR) + "/half_game.expected"));
}

TEST(RefereeLog, Errors) {
  std::stringstream bad_cmd("0.0 Kickoff FirstHalf 0\n");
  EXPECT_THROW(loadRefereeLog(bad_cmd), std::runtime_error);
  std::stringstream bad_flag("0.0 Stop FirstHalf 2\n");
  EXPECT_THROW(loadRefereeLog(bad_flag), std::runtime_error);
  std::stringstream bad_time("x Stop FirstHalf 0\n");
  EXPECT_THROW(loadRefereeLog(bad_time), std::runtime_error);
  std::stringstream unordered("1.0 Stop FirstHalf 0\n0.5 Halt FirstHalf 0\n");
  try {
    loadRefereeLog(unordered);
    FAIL();
  } catch (const std::runtime_error &e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

}  // namespace
}  // namespace sslm
