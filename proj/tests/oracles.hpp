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


// Reference computations for the tests. Deliberately written without the
// library's algorithms: reachability bisection, brute-force sweeps and
// plain case analysis.

#ifndef SSLMOTION_TESTS_ORACLES_HPP_
#define SSLMOTION_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

/// Minimum time for a double integrator with |v| <= vm, |a| <= a to go from
/// (x0, v0) to rest at `target`. Case analysis on the normalized problem;
/// requires |v0| <= vm.
inline double bangBangTime(double x0, double v0, double target, double vm, double a) {
  double d = target - x0;
  double u = v0;
  if (d < 0.0 || (d == 0.0 && u < 0.0)) {
    d = -d;
    u = -u;
  }
  auto restToRest = [&](double dist) {
    dist = std::abs(dist);
    if (dist >= vm * vm / a) return dist / vm + vm / a;
    return 2.0 * std::sqrt(dist / a);
  };
  const double stop = u * std::abs(u) / (2.0 * a);  // signed stopping displacement
  if (u < 0.0 || stop > d) {
    return std::abs(u) / a + restToRest(d - stop);
  }
  if (u == 0.0 && d == 0.0) return 0.0;
  const double peak_sq = a * d + 0.5 * u * u;
  if (peak_sq <= vm * vm) {
    return (2.0 * std::sqrt(peak_sq) - u) / a;
  }
  const double ramp = (vm * vm - u * u) / (2.0 * a) + vm * vm / (2.0 * a);
  return (vm - u) / a + (d - ramp) / vm + vm / a;
}

/// Integral over [0, T] of `f` by the composite midpoint rule.
template <typename F>
double integrate(F &&f, double T, int n) {
  const double h = T / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f((i + 0.5) * h);
  return s * h;
}

/// Reachable interval of end positions at time T when arriving at rest.
inline std::pair<double, double> reachable(double x0, double v0, double vm, double a, double T,
                                           int n) {
  const double hi = integrate([&](double t) { return std::min({vm, v0 + a * t, a * (T - t)}); }, T, n);
  const double lo = integrate([&](double t) { return std::max({-vm, v0 - a * t, -a * (T - t)}); }, T, n);
  return {x0 + lo, x0 + hi};
}

/// Smallest T whose reachable interval contains the target; bisection on T.
/// Requires |v0| <= vm.
inline double minimumTimeNumeric(double x0, double v0, double target, double vm, double a,
                                 int n = 20000) {
  auto feasible = [&](double T) {
    if (std::abs(v0) > a * T) return false;
    const auto [lo, hi] = reachable(x0, v0, vm, a, T, n);
    return lo <= target && target <= hi;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (!feasible(hi)) hi *= 2.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

/// Forward Euler integration of a piecewise-constant acceleration function.
template <typename Accel>
std::pair<double, double> simulate(double x0, double v0, Accel &&accel, double T, double dt) {
  double x = x0;
  double v = v0;
  const int n = static_cast<int>(std::llround(T / dt));
  for (int i = 0; i < n; ++i) {
    const double t = i * dt;
    const double acc = accel(t + 0.5 * dt);
    x += v * dt + 0.5 * acc * dt * dt;
    v += acc * dt;
  }
  return {x, v};
}

/// Real roots of a t^2 + b t + c in ascending order.
inline std::vector<double> quadraticRoots(double a, double b, double c) {
  std::vector<double> out;
  if (a == 0.0) {
    if (b != 0.0) out.push_back(-c / b);
    return out;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return out;
  const double s = std::sqrt(disc);
  out.push_back((-b - s) / (2.0 * a));
  out.push_back((-b + s) / (2.0 * a));
  if (out[0] > out[1]) std::swap(out[0], out[1]);
  return out;
}

}  // namespace oracle

#endif  // SSLMOTION_TESTS_ORACLES_HPP_
