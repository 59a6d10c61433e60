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

// Planner timing over random cluttered scenes.

#ifndef SSLMOTION_HARNESS_BENCH_HPP_
#define SSLMOTION_HARNESS_BENCH_HPP_

#include <chrono>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "sslmotion/harness/sim.hpp"
#include "sslmotion/planner.hpp"

namespace sslm {

struct BenchConfig {
  int obstacles = 15;
  int iterations = 1000;
  std::uint64_t seed = 7;
  double moving_fraction = 0.5;
  bool warm = false;  // replan each scene a second time from its first result
};

struct BenchResult {
  LatencyStats latency;
  int clean_plans = 0;
  int iterations = 0;
  double mean_candidates = 0.0;
};

/// One random scene: robot on the left half, target on the right half,
/// obstacles scattered in between, some of them moving.
/// Obstacles never spawn within 0.5 m of the start or the target.
inline PlanRequest randomScene(std::mt19937_64 &rng, int obstacles, double moving_fraction) {
  std::uniform_real_distribution<double> ux(-3.5, 3.5);
  std::uniform_real_distribution<double> uy(-2.5, 2.5);
  std::uniform_real_distribution<double> ur(0.09, 0.2);
  std::uniform_real_distribution<double> uv(-1.5, 1.5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  PlanRequest req;
  req.start.position = {std::uniform_real_distribution<double>(-4.0, -3.0)(rng), uy(rng)};
  req.start.velocity = {uv(rng), uv(rng)};
  req.target = {std::uniform_real_distribution<double>(3.0, 4.0)(rng), uy(rng)};
  for (int k = 0; k < obstacles; ++k) {
    Vec2 c{ux(rng), uy(rng)};
    // Keep start and target free so that most scenes are solvable.
    while ((c - req.start.position).norm() < 0.5 || (c - req.target).norm() < 0.5) {
      c = {ux(rng), uy(rng)};
    }
    const double r = ur(rng);
    if (u01(rng) < moving_fraction) {
      req.obstacles.push_back(MovingDisc{c, r, {uv(rng), uv(rng)}, 1.0});
    } else {
      req.obstacles.push_back(StaticDisc{c, r});
    }
  }
  return req;
}

inline BenchResult benchPlanner(const BenchConfig &cfg, const SearchConfig &search = {}) {
  if (cfg.obstacles < 0 || cfg.iterations <= 0) {
    throw std::invalid_argument("benchPlanner: need obstacles >= 0 and iterations > 0");
  }
  std::mt19937_64 rng(cfg.seed);
  std::vector<double> ms;
  ms.reserve(static_cast<std::size_t>(cfg.iterations));
  BenchResult out;
  out.iterations = cfg.iterations;
  double candidates = 0.0;
  for (int i = 0; i < cfg.iterations; ++i) {
    PlanRequest req = randomScene(rng, cfg.obstacles, cfg.moving_fraction);
    if (cfg.warm) req.previous = plan(req, search);
    const auto t0 = std::chrono::steady_clock::now();
    const PlanResult r = plan(req, search);
    ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    if (r.clean()) ++out.clean_plans;
    candidates += r.candidates_evaluated;
  }
  out.latency = latencyStats(std::move(ms));
  out.mean_candidates = candidates / cfg.iterations;
  return out;
}

}  // namespace sslm

#endif  // SSLMOTION_HARNESS_BENCH_HPP_
