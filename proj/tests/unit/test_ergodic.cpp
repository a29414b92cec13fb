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
#include <random>

#include <gtest/gtest.h>

#include "gibbsq/ergodic.hpp"
#include "oracles.hpp"

namespace gibbsq {
namespace {

PauliSumHamiltonian single_z() {
  PauliSumHamiltonian h(1);
  h.add(1.0, "Z");
  return h;
}

ErgodicConfig small_config(PauliSumHamiltonian h, int n_ancilla = 1) {
  ErgodicConfig c;
  c.hamiltonian = std::move(h);
  c.n_ancilla = n_ancilla;
  c.beta = 1.0;
  c.lambda = 0.1;
  c.gamma = 0.1;
  c.omega = 4.0;
  return c;
}

/// Tr over the high `ancilla` qubits, by explicit index arithmetic.
ComplexMatrix trace_high(const ComplexMatrix& m, int sys) {
  const Index sd = Index{1} << sys;
  ComplexMatrix out = ComplexMatrix::Zero(sd, sd);
  for (Index k = 0; k < m.rows() / sd; ++k) out += m.block(k * sd, k * sd, sd, sd);
  return out;
}

TEST(AncillaThermalState, Examples) {
  EXPECT_LT(max_abs(ancilla_thermal_state(0.0, {0.7, -2.0}).matrix() - identity(4) / 4.0), 1e-15);
  const auto hot = ancilla_thermal_state(1.0, {50.0});
  EXPECT_NEAR(hot.matrix()(0, 0).real(), 1.0 / (1.0 + std::exp(50.0)), 1e-35);
  EXPECT_NEAR(hot.matrix()(1, 1).real(), 1.0, 1e-15);
  const auto one = ancilla_thermal_state(1.0, {1.0});
  EXPECT_NEAR(one.matrix()(0, 0).real(), 0.26894, 1e-5);
  EXPECT_NEAR(one.matrix()(1, 1).real(), 0.73106, 1e-5);
}

TEST(AncillaThermalState, IsGibbsStateOfHalfOmegaZ) {
  const std::vector<double> w{0.3, -1.2, 2.0};
  const auto rho = ancilla_thermal_state(0.8, w);
  ComplexMatrix h = ComplexMatrix::Zero(8, 8);
  for (int m = 0; m < 3; ++m) {
    std::vector<oracle::Mat> ops(3, oracle::pauli('I'));
    ops[static_cast<std::size_t>(m)] = oracle::pauli('Z');
    h += 0.5 * w[static_cast<std::size_t>(m)] * oracle::tensor(ops);
  }
  const ComplexMatrix e = oracle::expm(-0.8 * h);
  EXPECT_LT(max_abs(rho.matrix() - e / e.trace().real()), 1e-14);
}

TEST(CycleChannel, ZeroTimeIsIdentity) {
  std::mt19937_64 g(41);
  const auto cfg = small_config(hardcore_bose_hubbard_1d(2, 1.0, 1.0));
  const auto rho = DensityMatrix::from_matrix(oracle::random_density(g, 4));
  const CycleDraw d{0.0, {1.3}, {0.4}, {-0.9}};
  EXPECT_LT(max_abs(cycle_channel(rho, cfg, d).matrix() - rho.matrix()), 1e-14);
}

TEST(CycleChannel, DecoupledSystemEvolvesUnitarily) {
  std::mt19937_64 g(43);
  auto cfg = small_config(hardcore_bose_hubbard_1d(2, 1.0, 1.0));
  cfg.lambda = 0.0;
  const auto rho = DensityMatrix::from_matrix(oracle::random_density(g, 4));
  const CycleDraw d{1.7, {2.1}, {0.4}, {-0.9}};
  const ComplexMatrix u = oracle::expm(cplx(0, -1.7) * cfg.hamiltonian.dense());
  EXPECT_LT(max_abs(cycle_channel(rho, cfg, d).matrix() - u * rho.matrix() * u.adjoint()), 1e-12);
}

TEST(CycleChannel, SingleQubitMatchesBruteForce) {
  const auto cfg = small_config(single_z());
  const CycleDraw d{1.0, {0.5}, {1.0}, {0.0}};
  std::mt19937_64 g(45);
  const ComplexMatrix rho = oracle::random_density(g, 2);
  // System on bit 0, ancilla on bit 1.
  const ComplexMatrix h = oracle::tensor({oracle::pauli('Z'), oracle::pauli('I')}) +
                          0.25 * oracle::tensor({oracle::pauli('I'), oracle::pauli('Z')}) +
                          0.1 * oracle::tensor({oracle::pauli('X'), oracle::pauli('X')});
  const ComplexMatrix u = oracle::expm(cplx(0, -1) * h);
  ComplexMatrix sigma = ComplexMatrix::Zero(2, 2);
  sigma(0, 0) = 1.0 / (1.0 + std::exp(0.5));
  sigma(1, 1) = 1.0 - sigma(0, 0);
  const ComplexMatrix ref = trace_high(u * oracle::tensor({rho, sigma}) * u.adjoint(), 1);
  EXPECT_LT(max_abs(cycle_channel(DensityMatrix::from_matrix(rho), cfg, d).matrix() - ref), 1e-12);
}

TEST(CycleChannel, ZCouplingAndAncillaMapMatchBruteForce) {
  auto cfg = small_config(hardcore_bose_hubbard_1d(2, 1.0, 0.5));
  cfg.ancilla_map = {1};
  const CycleDraw d{0.8, {-1.1}, {0.3}, {0.7}};
  std::mt19937_64 g(47);
  const ComplexMatrix rho = oracle::random_density(g, 4);
  const oracle::Mat I = oracle::pauli('I'), X = oracle::pauli('X'), Z = oracle::pauli('Z');
  const ComplexMatrix h = oracle::kron2(I, cfg.hamiltonian.dense()) +
                          0.5 * -1.1 * oracle::tensor({I, I, Z}) +
                          0.1 * (0.3 * oracle::tensor({I, X, X}) + 0.7 * oracle::tensor({I, Z, X}));
  const ComplexMatrix u = oracle::expm(cplx(0, -0.8) * h);
  ComplexMatrix sigma = ComplexMatrix::Zero(2, 2);
  sigma(0, 0) = 1.0 / (1.0 + std::exp(-1.1));
  sigma(1, 1) = 1.0 - sigma(0, 0);
  const ComplexMatrix ref = trace_high(u * oracle::kron2(sigma, rho) * u.adjoint(), 2);
  EXPECT_LT(max_abs(cycle_channel(DensityMatrix::from_matrix(rho), cfg, d).matrix() - ref), 1e-12);
}

TEST(CycleChannel, TracePreservingAndPositiveForRandomDraws) {
  auto cfg = small_config(hardcore_bose_hubbard_1d(3, 1.0, 1.0), 2);
  cfg.lambda = 0.5;
  const ErgodicOperators ops(cfg);
  std::mt19937_64 g(49);
  Stream rng(5, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const ComplexMatrix rho = oracle::random_density(g, 8);
    const ComplexMatrix out = ops.apply(rho, draw_cycle(rng, cfg), cfg.beta, cfg.lambda);
    EXPECT_NEAR(out.trace().real(), 1.0, 1e-10);
    EXPECT_GE(herm_eig(0.5 * (out + out.adjoint())).values.minCoeff(), -1e-10);
    EXPECT_LT(max_abs(out - out.adjoint()), 1e-12);
  }
}

TEST(CycleChannel, DecoupledEnergyPopulationsAreInvariant) {
  auto cfg = small_config(hardcore_bose_hubbard_1d(3, 1.0, 1.0));
  cfg.lambda = 0.0;
  const Spectrum s = herm_eig(cfg.hamiltonian.dense());
  std::mt19937_64 g(51);
  DensityMatrix rho = DensityMatrix::from_matrix(oracle::random_density(g, 8));
  const RealVector p0 = populations(rho, s.vectors);
  Stream rng(1, 1);
  for (int k = 0; k < 10; ++k) rho = cycle_channel(rho, cfg, draw_cycle(rng, cfg));
  EXPECT_LT((populations(rho, s.vectors) - p0).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(CycleChannel, SampledMeanOverFiniteDrawSetMatchesExplicitAverage) {
  auto cfg = small_config(hardcore_bose_hubbard_1d(2, 1.0, 1.0));
  cfg.lambda = 0.4;
  const std::vector<CycleDraw> draws = {
      {0.5, {1.0}, {0.3}, {-0.2}}, {2.0, {-2.5}, {1.1}, {0.4}}, {1.2, {0.1}, {-0.7}, {0.9}}};
  const DensityMatrix rho = DensityMatrix::basis_state(2, 1);
  std::vector<ComplexMatrix> outs;
  ComplexMatrix exact = ComplexMatrix::Zero(4, 4);
  for (const auto& d : draws) {
    outs.push_back(cycle_channel(rho, cfg, d).matrix());
    exact += outs.back() / 3.0;
  }
  Stream rng(9, 0);
  const int n = 3000;
  ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
  RealMatrix sq = RealMatrix::Zero(4, 4);
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix& o = outs[rng.below(3)];
    sum += o;
    sq += o.real().cwiseProduct(o.real());
  }
  const RealMatrix mean = (sum / n).real();
  const RealMatrix sigma = ((sq / n - mean.cwiseProduct(mean)).cwiseMax(0.0) / n).cwiseSqrt();
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) {
      EXPECT_LE(std::abs(mean(i, j) - exact(i, j).real()), 3.0 * sigma(i, j) + 1e-12) << i << "," << j;
    }
  }
}

TEST(RunErgodic, IsDeterministicAndThreadIndependent) {
  auto cfg = small_config(hardcore_bose_hubbard_1d(2, 1.0, 1.0));
  cfg.cycles = 4;
  cfg.samples = 40;
  cfg.keep_records = true;
  cfg.threads = 1;
  const auto a = run_ergodic(cfg);
  cfg.threads = 3;
  const auto b = run_ergodic(cfg);
  EXPECT_EQ(max_abs(a.mean_state.matrix() - b.mean_state.matrix()), 0.0);
  EXPECT_EQ((a.eigen_probs - b.eigen_probs).cwiseAbs().maxCoeff(), 0.0);
  ASSERT_EQ(a.records.size(), 40u);
  EXPECT_EQ(a.records[7].parameters.size(), 4u * 4u);
  EXPECT_EQ(a.records[7].initial_state, b.records[7].initial_state);
}

TEST(RunErgodic, InfiniteTemperatureConvergesToMaximallyMixed) {
  auto cfg = small_config(hardcore_bose_hubbard_1d(2, 1.0, 1.0));
  cfg.beta = 0.0;
  cfg.lambda = 0.5;
  cfg.cycles = 30;
  cfg.samples = 200;
  const auto r = run_ergodic(cfg);
  const auto& td = r.per_cycle_trace_distance;
  EXPECT_LT(td.back(), 0.1);
  EXPECT_LT(td.back(), td.front());
}

TEST(RunErgodic, SingleQubitApproachesBoltzmannWeights) {
  // Weak coupling and many cycles; the residual bias shrinks with lambda.
  ErgodicConfig cfg = small_config(single_z());
  cfg.gamma = 0.01;
  cfg.cycles = 200;
  cfg.samples = 200;
  const auto r = run_ergodic(cfg);
  for (Index mu = 0; mu < 2; ++mu) {
    EXPECT_NEAR(r.eigen_probs(mu), r.exact_probs(mu), 0.05 + 3 * r.eigen_probs_stderr(mu));
  }
}

TEST(RunErgodic, EnergyMovesTowardThermalValue) {
  auto cfg = small_config(hardcore_bose_hubbard_1d(3, 1.0, 1.0), 2);
  cfg.cycles = 15;
  cfg.samples = 200;
  const auto r = run_ergodic(cfg);
  const double gap0 = std::abs(r.per_cycle_energy.front() - r.exact_energy);
  const double gap1 = std::abs(r.per_cycle_energy.back() - r.exact_energy);
  EXPECT_LT(gap1, gap0);
  EXPECT_LT(r.per_cycle_trace_distance.back(), r.per_cycle_trace_distance.front());
}

TEST(RunErgodic, NoisePushesTowardMaximallyMixed) {
  auto cfg = small_config(hardcore_bose_hubbard_1d(2, 1.0, 1.0));
  cfg.beta = 3.0;
  cfg.cycles = 8;
  cfg.samples = 64;
  const auto clean = run_ergodic(cfg);
  cfg.noise_rate = 0.05;
  const auto noisy = run_ergodic(cfg);
  const auto mixed = DensityMatrix::maximally_mixed(2);
  EXPECT_LT(trace_distance(noisy.mean_state, mixed), trace_distance(clean.mean_state, mixed));
}

TEST(ErgodicConfig, Validation) {
  auto cfg = small_config(hardcore_bose_hubbard_1d(2, 1.0, 1.0));
  cfg.n_ancilla = 3;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg.ancilla_map = {0, 1};
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg.ancilla_map = {0, 1, 2};
  EXPECT_THROW(cfg.validate(), DimensionError);
  cfg.ancilla_map = {0, 1, 1};
  EXPECT_NO_THROW(cfg.validate());
  cfg.hamiltonian = hardcore_bose_hubbard_1d(10, 1.0, 1.0);
  EXPECT_THROW(cfg.validate(), DimensionError);
}

TEST(ErgodicConfig, LinearDecaySchedule) {
  auto cfg = small_config(single_z());
  cfg.cycles = 4;
  cfg.schedule = LambdaSchedule::kLinearDecay;
  EXPECT_DOUBLE_EQ(cfg.lambda_at(1), 0.1);
  EXPECT_DOUBLE_EQ(cfg.lambda_at(3), 0.05);
}

}  // namespace
}  // namespace gibbsq
