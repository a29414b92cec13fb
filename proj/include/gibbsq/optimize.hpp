// Copyright 2026 The gibbsq Authors
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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "gibbsq/errors.hpp"
#include "gibbsq/rng.hpp"

namespace gibbsq {

struct PatternSearchOptions {
  int budget = 500;            // objective evaluations, including the starting point
  double initial_step = 0.5;
  double min_step = 1e-4;      // a sweep below this step triggers a restart
  std::uint64_t seed = 1;      // coordinate order after each restart
  std::vector<double> lower;   // optional box, same length as x0
  std::vector<double> upper;
};

struct PatternSearchResult {
  std::vector<double> x;
  double value = 0.0;
  double initial_value = 0.0;
  int evaluations = 0;
  int restarts = 0;
};

/// Derivative-free minimization by compass search. Each sweep probes +-step
/// along every coordinate and keeps a move only if it lowers the objective;
/// an accepted move is repeated with doubled length while it keeps helping.
/// A sweep without progress halves the step; once the step drops below
/// min_step the search restarts from the incumbent with a shorter initial
/// step and a reshuffled coordinate order. `observe(x, f)` sees every
/// evaluation in order.
inline PatternSearchResult pattern_search(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
    const PatternSearchOptions& opt,
    const std::function<void(const std::vector<double>&, double)>& observe = {}) {
  if (opt.budget < 1) throw DomainError("optimizer budget must be at least 1");
  if (!(opt.initial_step > 0.0)) throw DomainError("initial step must be positive");
  const std::size_t n = x0.size();
  const bool boxed = !opt.lower.empty();
  if (boxed && (opt.lower.size() != n || opt.upper.size() != n)) {
    throw DimensionError("bounds must match the parameter count");
  }
  auto clamp = [&](std::vector<double>& x) {
    if (!boxed) return;
    for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], opt.lower[i], opt.upper[i]);
  };
  PatternSearchResult r;
  auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    ++r.evaluations;
    if (observe) observe(x, v);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  clamp(x0);
  r.x = x0;
  r.value = r.initial_value = eval(r.x);
  if (n == 0) return r;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  double base_step = opt.initial_step;
  double step = base_step;
  while (r.evaluations < opt.budget) {
    bool moved = false;
    for (std::size_t i : order) {
      for (double dir : {1.0, -1.0}) {
        if (r.evaluations >= opt.budget) break;
        double len = dir * step;
        std::vector<double> y = r.x;
        y[i] += len;
        clamp(y);
        if (y[i] == r.x[i]) continue;
        double fy = eval(y);
        if (fy >= r.value) continue;
        // Extend along a successful direction.
        while (fy < r.value && r.evaluations < opt.budget) {
          r.x = y;
          r.value = fy;
          len *= 2.0;
          y[i] += len;
          clamp(y);
          if (y[i] == r.x[i]) break;
          fy = eval(y);
        }
        moved = true;
        break;
      }
    }
    if (moved) continue;
    step *= 0.5;
    if (step < opt.min_step) {
      ++r.restarts;
      base_step *= 0.5;
      if (base_step < opt.min_step) base_step = opt.initial_step;
      step = base_step;
      Stream rng(opt.seed, static_cast<std::uint64_t>(r.restarts));
      for (std::size_t k = n; k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);
    }
  }
  return r;
}

}  // namespace gibbsq
