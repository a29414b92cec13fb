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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gibbsq/mitigation.hpp"
#include "oracles.hpp"

namespace gibbsq {
namespace {

PauliSumHamiltonian single_z() {
  PauliSumHamiltonian h(1);
  h.add(1.0, "Z");
  return h;
}

UniversalConfig noisy_universal(PauliSumHamiltonian h, int d, double p2, double p3) {
  UniversalConfig c;
  c.hamiltonian = std::move(h);
  c.cycles = d;
  c.mode = Mode::kFixedAngles;
  c.samples = 1;
  c.noise = {p2, p3};
  return c;
}

TEST(FreeEnergy, Examples) {
  const auto h = hardcore_bose_hubbard_1d(3, 1.0, 1.0);
  const auto g = exact_gibbs(h, 0.7);
  EXPECT_NEAR(free_energy(g.rho, h, 0.7), -g.log_partition / 0.7, 1e-12);
  EXPECT_NEAR(free_energy(DensityMatrix::maximally_mixed(1), single_z(), 1.0), -std::log(2.0), 1e-15);
  EXPECT_THROW(free_energy(g.rho, h, 0.0), DomainError);
}

TEST(FreeEnergy, ExcessIsRelativeEntropyOverBeta) {
  std::mt19937_64 gen(91);
  const auto h = heisenberg_like_1d(3, -2.0, 4.0, -1.0);
  for (double beta : {0.5, 1.0, 2.0}) {
    const auto g = exact_gibbs(h, beta);
    const double fb = free_energy(g.rho, h, beta);
    for (int trial = 0; trial < 100; ++trial) {
      const auto rho = DensityMatrix::from_matrix(oracle::random_density(gen, 8));
      const double excess = free_energy(rho, h, beta) - fb;
      EXPECT_NEAR(excess, relative_entropy(rho, g.rho) / beta, 1e-9);
      EXPECT_GE(excess, -1e-12);
    }
  }
}

TEST(PatternSearch, MinimizesQuadraticWithinBudget) {
  int calls = 0;
  auto f = [&](const std::vector<double>& x) {
    ++calls;
    return (x[0] - 1.3) * (x[0] - 1.3) + 3.0 * (x[1] + 0.4) * (x[1] + 0.4) + 0.5 * x[0] * x[1];
  };
  PatternSearchOptions opt;
  opt.budget = 400;
  const auto r = pattern_search(f, {0.0, 0.0}, opt);
  EXPECT_LE(calls, 400);
  EXPECT_EQ(r.evaluations, calls);
  // Stationary point of the quadratic, solved by hand.
  const double x1 = (-2.4 - 0.5 * 1.3) / (6.0 - 0.125), x0 = 1.3 - 0.25 * x1;
  EXPECT_NEAR(r.x[0], x0, 1e-3);
  EXPECT_NEAR(r.x[1], x1, 1e-3);
  EXPECT_LE(r.value, r.initial_value);
}

TEST(PatternSearch, IsDeterministicAndRespectsBounds) {
  auto f = [](const std::vector<double>& x) { return std::sin(3 * x[0]) + std::cos(2 * x[1]) + 0.1 * x[2] * x[2]; };
  PatternSearchOptions opt;
  opt.budget = 300;
  opt.seed = 5;
  opt.lower = {-0.2, -1.0, -1.0};
  opt.upper = {0.2, 1.0, 1.0};
  std::vector<std::vector<double>> seen;
  const auto a = pattern_search(f, {0.1, 0.3, 0.9}, opt, [&](const std::vector<double>& x, double) { seen.push_back(x); });
  const auto b = pattern_search(f, {0.1, 0.3, 0.9}, opt);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.value, b.value);
  for (const auto& x : seen) {
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_GE(x[i], opt.lower[i]);
      EXPECT_LE(x[i], opt.upper[i]);
    }
  }
  EXPECT_THROW(pattern_search(f, {0, 0, 0}, PatternSearchOptions{0}), DomainError);
}

TEST(Mitigation, NoisyUniversalImprovesAndStaysAboveBound) {
  MitigationProblem p;
  p.base = UniversalMitigation{noisy_universal(hardcore_bose_hubbard_1d(3, 1.0, 1.0), 3, 0.01, 0.02)};
  p.budget = 300;
  const auto r = optimize(p);
  EXPECT_LT(r.F_after, r.F_before);
  EXPECT_FALSE(r.no_improvement);
  EXPECT_EQ(r.evaluations, 300);
  ASSERT_EQ(r.trajectory.size(), 300u);
  for (const auto& t : r.trajectory) EXPECT_GE(t.free_energy, r.F_gibbs - 1e-9);
  EXPECT_NEAR(free_energy(r.best_state, hardcore_bose_hubbard_1d(3, 1.0, 1.0), 1.0), r.F_after, 1e-12);
  EXPECT_EQ(r.param_names.size(), r.best_params.size());
}

TEST(Mitigation, IsDeterministic) {
  MitigationProblem p;
  p.base = UniversalMitigation{noisy_universal(hardcore_bose_hubbard_1d(2, 1.0, 1.0), 2, 0.02, 0.02)};
  p.budget = 80;
  const auto a = optimize(p), b = optimize(p);
  EXPECT_EQ(a.best_params, b.best_params);
  EXPECT_EQ(a.F_after, b.F_after);
}

TEST(Mitigation, SingleQubitToyMatchesGridSearch) {
  const double p = 0.05;
  MitigationProblem prob;
  prob.base = UniversalMitigation{noisy_universal(single_z(), 2, p, 0.0)};
  prob.budget = 500;
  const auto r = optimize(prob);

  // h = 2|0><0|, v = sqrt(beta * 2 / d) = 1, K = diag(cos theta, 1); depolarize after each gate.
  auto F = [&](double t1, double t2) {
    double a = 0.5, b = 0.5;
    for (double t : {t1, t2}) {
      a *= std::cos(t) * std::cos(t);
      const double na = (1 - 2 * p) * a + 2 * p * b, nb = (1 - 2 * p) * b + 2 * p * a;
      a = na;
      b = nb;
    }
    const double s = a + b;
    a /= s;
    b /= s;
    const double ent = -(a > 0 ? a * std::log(a) : 0.0) - (b > 0 ? b * std::log(b) : 0.0);
    return a - b - ent;
  };
  double best = INFINITY;
  for (double t1 = -std::numbers::pi; t1 <= std::numbers::pi; t1 += 1e-2) {
    for (double t2 = -std::numbers::pi; t2 <= std::numbers::pi; t2 += 1e-2) best = std::min(best, F(t1, t2));
  }
  EXPECT_NEAR(F(r.best_params[0], r.best_params[1]), r.F_after, 1e-12);
  EXPECT_NEAR(r.F_after, best, 1e-4);
}

TEST(Mitigation, NoiselessOptimumDoesNotMoveAwayFromGibbs) {
  auto c = noisy_universal(hardcore_bose_hubbard_1d(2, 1.0, 1.0), 8, 0.0, 0.0);
  MitigationProblem p;
  p.base = UniversalMitigation{c};
  p.budget = 300;
  const auto r = optimize(p);
  EXPECT_LE(r.F_after, r.F_before);
  EXPECT_LE(r.trace_distance_after, r.trace_distance_before + 1e-9);
}

TEST(Mitigation, ErgodicFrequenciesImproveNoisyRun) {
  ErgodicConfig e;
  e.hamiltonian = hardcore_bose_hubbard_1d(2, 1.0, 1.0);
  e.n_ancilla = 1;
  e.lambda = 0.3;
  e.gamma = 0.1;
  e.omega = 4.0;
  e.cycles = 4;
  e.noise_rate = 0.01;
  MitigationProblem p;
  p.base = ErgodicMitigation{e, true};
  p.budget = 150;
  const auto r = optimize(p);
  EXPECT_EQ(r.best_params.size(), 12u);
  EXPECT_LT(r.F_after, r.F_before);
  for (std::size_t k = 0; k < r.best_params.size(); k += 3) EXPECT_LE(std::abs(r.best_params[k]), 4.0);
}

}  // namespace
}  // namespace gibbsq
