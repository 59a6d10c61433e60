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

// sslm: command-line front end.
//
//   sslm run <scenario.json> [--seed N] [--report out.json] [--trace out.txt]
//   sslm bench [--obstacles K] [--iters M]
//   sslm parse-ref <referee.log>
//   sslm replay <commands.log> [--frame t,x,y,heading] [--now t]

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sslmotion/sslmotion.hpp"

namespace {

template <typename Fn>
void writeTo(const std::string &path, Fn &&fn) {
  if (path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  fn(os);
}

std::ifstream openInput(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return is;
}

int runScenario(const std::string &file, std::optional<std::uint64_t> seed,
                const std::string &report_path, const std::string &trace_path, bool timing) {
  sslm::Scenario s = sslm::loadScenario(file);
  for (const std::string &name : sslm::applyEnvOverrides(s)) {
    std::cerr << "override: " << name << "\n";
  }
  if (seed) s.seed = *seed;
  const sslm::SimReport r = sslm::run(s);
  const auto j = sslm::reportJson(r, timing);
  if (!report_path.empty()) {
    writeTo(report_path, [&](std::ostream &os) { os << j.dump(2) << "\n"; });
  }
  if (!trace_path.empty()) {
    writeTo(trace_path, [&](std::ostream &os) { sslm::writeTrace(os, r); });
  }
  std::printf("scenario %s: %d foul(s)\n", r.scenario.c_str(), r.fouls.total());
  for (const sslm::RobotReport &rr : r.robots) {
    if (rr.completion_time) {
      std::printf("  robot %d: done at %.3f s, min clearance %.4f m\n", rr.id, *rr.completion_time,
                  rr.min_clearance);
    } else {
      std::printf("  robot %d: not done, min clearance %.4f m\n", rr.id, rr.min_clearance);
    }
  }
  return 0;
}

int bench(int obstacles, int iters, std::uint64_t seed, bool warm) {
  sslm::BenchConfig cfg;
  cfg.obstacles = obstacles;
  cfg.iterations = iters;
  cfg.seed = seed;
  cfg.warm = warm;
  const sslm::BenchResult r = sslm::benchPlanner(cfg);
  std::printf("obstacles=%d iters=%d %s\n", obstacles, iters, warm ? "warm" : "cold");
  std::printf("median_ms=%.4f p95_ms=%.4f p99_ms=%.4f max_ms=%.4f\n", r.latency.median_ms,
              r.latency.p95_ms, r.latency.p99_ms, r.latency.max_ms);
  std::printf("clean=%d/%d mean_candidates=%.2f\n", r.clean_plans, r.iterations, r.mean_candidates);
  return 0;
}

int parseRef(const std::string &file) {
  auto is = openInput(file);
  sslm::writeLeafTimeline(std::cout, sslm::loadRefereeLog(is));
  return 0;
}

int replay(const std::string &file, const std::vector<double> &frame, std::optional<double> now) {
  auto is = openInput(file);
  const auto log = sslm::loadCommandLog(is);
  sslm::VisionFrame f;
  if (!frame.empty()) {
    if (frame.size() != 4) throw std::invalid_argument("--frame takes t,x,y,heading");
    f.t_capture = frame[0];
    f.position = {frame[1], frame[2]};
    f.heading = frame[3];
  } else if (!log.empty()) {
    f.t_capture = log.front().t_sent;
  }
  const double t = now.value_or(log.empty() ? f.t_capture : log.back().t_sent);
  const sslm::RobotState s = sslm::predictCurrentState(f, log, t);
  std::printf("t=%.6f x=%.6f y=%.6f heading=%.6f vx=%.6f vy=%.6f omega=%.6f\n", t, s.position.x,
              s.position.y, s.heading, s.velocity.x, s.velocity.y, s.angular_velocity);
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"sslm: motion planning and control toolkit"};
  app.require_subcommand(1);

  std::string scenario_file, report_path, trace_path;
  std::uint64_t seed = 0;
  bool timing = false;
  auto *run_cmd = app.add_subcommand("run", "Run a scenario in closed loop");
  run_cmd->add_option("scenario", scenario_file, "Scenario JSON file")->required();
  auto *seed_opt = run_cmd->add_option("--seed", seed, "Override the scenario seed");
  run_cmd->add_option("--report", report_path, "Write the JSON report here ('-' for stdout)");
  run_cmd->add_option("--trace", trace_path, "Write the per-tick trace here ('-' for stdout)");
  run_cmd->add_flag("--with-timing", timing, "Include wall-clock planner latency in the report");

  int obstacles = 15, iters = 1000;
  std::uint64_t bench_seed = 7;
  bool warm = false;
  auto *bench_cmd = app.add_subcommand("bench", "Time the planner on random scenes");
  bench_cmd->add_option("--obstacles", obstacles, "Obstacles per scene")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--iters", iters, "Number of scenes")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench_seed, "Scene generator seed");
  bench_cmd->add_flag("--warm", warm, "Pass a previous plan to each call");

  std::string ref_file;
  auto *ref_cmd = app.add_subcommand("parse-ref", "Print the state-machine leaf timeline of a referee log");
  ref_cmd->add_option("log", ref_file, "Referee log")->required();

  std::string cmd_file;
  std::vector<double> frame;
  double now = 0.0;
  auto *replay_cmd = app.add_subcommand("replay", "Predict the current state from a command log");
  replay_cmd->add_option("log", cmd_file, "Command log")->required();
  replay_cmd->add_option("--frame", frame, "Vision frame t,x,y,heading (default: origin at the first command)")
      ->delimiter(',');
  auto *now_opt = replay_cmd->add_option("--now", now, "Prediction time (default: last command)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      return runScenario(scenario_file, *seed_opt ? std::optional(seed) : std::nullopt, report_path,
                         trace_path, timing);
    }
    if (*bench_cmd) return bench(obstacles, iters, bench_seed, warm);
    if (*ref_cmd) return parseRef(ref_file);
    if (*replay_cmd) return replay(cmd_file, frame, *now_opt ? std::optional(now) : std::nullopt);
  } catch (const sslm::ScenarioError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
