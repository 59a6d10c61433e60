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

// SSLM_* environment overrides applied on top of a loaded scenario.

#ifndef SSLMOTION_HARNESS_ENV_HPP_
#define SSLMOTION_HARNESS_ENV_HPP_

#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sslmotion/harness/scenario.hpp"

namespace sslm {

using EnvLookup = std::function<std::optional<std::string>(const char *)>;

inline EnvLookup processEnv() {
  return [](const char *name) -> std::optional<std::string> {
    const char *v = std::getenv(name);
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  };
}

namespace detail {

inline std::optional<double> envNumber(const EnvLookup &env, const char *name) {
  const auto raw = env(name);
  if (!raw) return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(*raw, &used);
  } catch (const std::exception &) {
    throw ScenarioError(name, "not a number: '" + *raw + "'");
  }
  if (used != raw->size() || !std::isfinite(v)) {
    throw ScenarioError(name, "not a number: '" + *raw + "'");
  }
  return v;
}

inline std::optional<double> envPositive(const EnvLookup &env, const char *name) {
  auto v = envNumber(env, name);
  if (v && !(*v > 0.0)) throw ScenarioError(name, "must be > 0");
  return v;
}

}  // namespace detail

/// Applies every recognised variable and returns the names that were set.
/// Motion limits apply to all robots.
inline std::vector<std::string> applyEnvOverrides(Scenario &s, const EnvLookup &env = processEnv()) {
  std::vector<std::string> applied;
  auto positive = [&](const char *name, auto &&assign) {
    if (auto v = detail::envPositive(env, name)) {
      assign(*v);
      applied.emplace_back(name);
    }
  };
  positive("SSLM_V_MAX", [&](double v) { for (auto &r : s.robots) r.limits.v_max = v; });
  positive("SSLM_A_MAX", [&](double v) { for (auto &r : s.robots) r.limits.a_max = v; });
  positive("SSLM_OMEGA_MAX", [&](double v) { for (auto &r : s.robots) r.limits.omega_max = v; });
  positive("SSLM_ALPHA_MAX", [&](double v) { for (auto &r : s.robots) r.limits.alpha_max = v; });
  positive("SSLM_K_OMEGA", [&](double v) { s.gains.k_omega = v; });
  positive("SSLM_D_SLOW", [&](double v) { s.gains.d_slow = v; });
  positive("SSLM_K_P", [&](double v) { s.gains.k_p = v; });
  positive("SSLM_K_RADIAL", [&](double v) { s.gains.k_radial = v; });
  positive("SSLM_VISION_RATE", [&](double v) { s.vision.rate_hz = v; });
  positive("SSLM_CHECK_DT", [&](double v) { s.search.check_dt = v; });
  if (auto v = detail::envNumber(env, "SSLM_VISION_LATENCY")) {
    if (*v < 0.0) throw ScenarioError("SSLM_VISION_LATENCY", "must be >= 0");
    s.vision.latency_s = *v;
    applied.emplace_back("SSLM_VISION_LATENCY");
  }
  return applied;
}

}  // namespace sslm

#endif  // SSLMOTION_HARNESS_ENV_HPP_
