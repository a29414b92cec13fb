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

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "gibbsq/errors.hpp"

namespace gibbsq {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

namespace detail {

// 15-point Kronrod nodes on [0, 1] (symmetric), with the embedded 7-point
// Gauss weights on the odd-indexed nodes.
inline constexpr std::array<double, 8> kKronrodX = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodW = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussW = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gauss_kronrod(F& f, double a, double b, double& kronrod, double& gauss) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  kronrod = kKronrodW[7] * fc;
  gauss = kGaussW[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kKronrodX[static_cast<std::size_t>(i)];
    const double pair = f(c - dx) + f(c + dx);
    kronrod += kKronrodW[static_cast<std::size_t>(i)] * pair;
    if (i % 2 == 1) gauss += kGaussW[static_cast<std::size_t>(i / 2)] * pair;
  }
  kronrod *= h;
  gauss *= h;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b] to an absolute
/// tolerance. Intervals are bisected until each local error estimate is below
/// its share of the tolerance.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double abs_tol, int max_depth = 60) {
  struct Segment {
    double a, b;
    int depth;
  };
  QuadratureResult r;
  std::vector<Segment> stack{{a, b, 0}};
  const double width = b - a;
  while (!stack.empty()) {
    const Segment s = stack.back();
    stack.pop_back();
    double k = 0.0, g = 0.0;
    detail::gauss_kronrod(f, s.a, s.b, k, g);
    r.evaluations += 15;
    const double err = std::abs(k - g);
    const double share = abs_tol * (s.b - s.a) / width;
    if (err <= share || err <= 1e-15 * std::abs(k)) {
      r.value += k;
      r.error += err;
      continue;
    }
    if (s.depth >= max_depth || r.evaluations > 2'000'000) {
      throw ConvergenceError("adaptive quadrature did not converge on [" + std::to_string(s.a) +
                             ", " + std::to_string(s.b) + "]");
    }
    const double m = 0.5 * (s.a + s.b);
    stack.push_back({m, s.b, s.depth + 1});
    stack.push_back({s.a, m, s.depth + 1});
  }
  return r;
}

/// F(z0, g, W) = integral over [-W, W] of [n(z + z0) - n(z0)] / (z^2 + g^2),
/// n(x) = 1 / (1 + e^x). Pairing z with -z gives the cancellation-free
/// integrand tanh(z0/2) sinh^2(z/2) / (sinh^2(z/2) + cosh^2(z0/2)) on [0, W].
inline double lemma_s1_residual(double z0, double g, double W) {
  if (!(g > 0.0) || !(W > 0.0) || !std::isfinite(z0)) {
    throw DomainError("lemma residual needs g > 0, W > 0 and finite z0");
  }
  const double t = std::tanh(0.5 * z0);
  if (t == 0.0) return 0.0;
  const double c = std::cosh(0.5 * z0);
  auto integrand = [&](double z) {
    const double s = std::sinh(0.5 * z);
    const double ratio = std::isinf(s) ? 1.0 : s * s / (s * s + c * c);
    return t * ratio / (z * z + g * g);
  };
  // Split at the feature scales g and |z0| so the first bisections land well.
  std::vector<double> cuts{0.0};
  for (double x : {g, 10.0 * g, std::abs(z0)}) {
    if (x > cuts.back() && x < W) cuts.push_back(x);
  }
  cuts.push_back(W);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrate(integrand, cuts[i], cuts[i + 1], 1e-10 / static_cast<double>(cuts.size())).value;
  }
  return total;
}

}  // namespace gibbsq
