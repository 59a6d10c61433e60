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


// Plans a path past a wall of obstacles and prints it at 0.1 s steps.

#include <cstdio>

#include "sslmotion/planner.hpp"

int main() {
  sslm::PlanRequest req;
  req.start.position = {-2.0, 0.0};
  req.target = {2.0, 0.0};
  for (double y : {-0.4, -0.2, 0.0, 0.2, 0.4}) {
    req.obstacles.push_back(sslm::StaticDisc{{0.0, y}, 0.1});
  }
  req.obstacles.push_back(sslm::MovingDisc{{1.0, -2.0}, 0.09, {0.0, 1.0}, 3.0});

  const sslm::PlanResult r = sslm::plan(req);
  std::printf("kind=%s total_time=%.3f clean=%s candidates=%d\n", sslm::toString(r.kind),
              r.total_time, r.clean() ? "yes" : "no", r.candidates_evaluated);
  if (r.intermediate) {
    std::printf("via (%.3f, %.3f)\n", r.intermediate->x, r.intermediate->y);
  }
  for (double t = 0.0; t < r.total_time + 0.1; t += 0.1) {
    const auto s = r.trajectory.sample(t);
    std::printf("%.1f  %+.3f %+.3f  %+.3f %+.3f\n", t, s.position.x, s.position.y, s.velocity.x,
                s.velocity.y);
  }
  return 0;
}
