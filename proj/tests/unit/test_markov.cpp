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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gibbsq/markov.hpp"
#include "gibbsq/quadrature.hpp"
#include "oracles.hpp"

namespace gibbsq {
namespace {

TransitionMatrix chain4() {
  return build_transition_matrix(hardcore_bose_hubbard_1d(4, 1.0, 0.1), density_couplings(4), 1.0, 1.0, 0.1, 0);
}

/// Composite Simpson rule on a uniform grid.
template <class F>
double simpson(F f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

TEST(WindowF, EvenAndScalarValues) {
  std::mt19937_64 g(61);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(g);
    EXPECT_LE(std::abs(window_f(x, 1.0, 0.1) - window_f(-x, 1.0, 0.1)), 1e-15);
  }
  EXPECT_NEAR(window_f(0.0, 1.0, 0.1), 2.0 / std::numbers::pi * std::atan(10.0), 1e-15);
  EXPECT_NEAR(window_f(0.0, 1.0, 0.1), 0.93655, 1e-5);
  EXPECT_NEAR(window_f(0.5, 1e6, 1.0), 1.0, 1e-5);
  EXPECT_NEAR(window_f(1.0, 1e6, 1.0), 0.5, 1e-5);
  EXPECT_NEAR(window_f(1.5, 1e6, 1.0), 0.0, 1e-5);
}

TEST(TransitionMatrix, ColumnsSumToOneAndEntriesAreProbabilities) {
  std::mt19937_64 g(63);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix h = oracle::random_hermitian(g, 8);
    std::vector<ComplexMatrix> v{oracle::random_hermitian(g, 8), oracle::random_hermitian(g, 8)};
    const auto tm = build_transition_matrix(h, v, 0.7, 2.0, 0.2);
    const RealVector sums = tm.T.colwise().sum();
    EXPECT_LT((sums.array() - 1.0).abs().maxCoeff(), 1e-14);
    EXPECT_GE(tm.T.minCoeff(), 0.0);
    EXPECT_LE(detailed_balance_residual(tm), 1e-10 * tm.T.cwiseAbs().maxCoeff());
  }
}

TEST(TransitionMatrix, EntriesMatchDirectFormula) {
  std::mt19937_64 g(65);
  const ComplexMatrix h = oracle::random_hermitian(g, 4);
  const ComplexMatrix v = oracle::random_hermitian(g, 4);
  const double beta = 0.9, Om = 1.5, gam = 0.3;
  const auto tm = build_transition_matrix(h, {v}, beta, Om, gam);
  RealMatrix raw = RealMatrix::Zero(4, 4);
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      if (mu == nu) continue;
      const ComplexVector a = tm.eigenvectors.col(mu), b = tm.eigenvectors.col(nu);
      const double s2 = std::norm((a.adjoint() * v * b)(0));
      const double w = tm.energies(mu) - tm.energies(nu);
      const double f = (std::atan(Om / gam * (1 - w / Om)) + std::atan(Om / gam * (1 + w / Om))) / std::numbers::pi;
      raw(mu, nu) = s2 * f / (1.0 + std::exp(beta * w));
    }
  }
  const double top = raw.colwise().sum().maxCoeff();
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      if (mu != nu) EXPECT_NEAR(tm.T(mu, nu), raw(mu, nu) / top, 1e-12);
    }
  }
}

TEST(TransitionMatrix, SteadyStateIsSectorGibbsDiagonal) {
  const auto tm = chain4();
  EXPECT_EQ(tm.size(), 6);
  const RealVector pi = steady_state(tm);
  // Sector energies from an independent diagonalization of the half-filled block.
  const ComplexMatrix h = hardcore_bose_hubbard_1d(4, 1.0, 0.1).dense();
  std::vector<int> idx;
  for (int j = 0; j < 16; ++j) {
    if (std::popcount(static_cast<unsigned>(j)) == 2) idx.push_back(j);
  }
  ComplexMatrix block(6, 6);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) block(a, b) = h(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
  const auto e = oracle::eigenvalues_general(block);
  RealVector want(6);
  for (int i = 0; i < 6; ++i) want(i) = std::exp(-e[static_cast<std::size_t>(i)]);
  want /= want.sum();
  EXPECT_LT(total_variation(pi, want), 1e-10);
  EXPECT_LE(detailed_balance_residual(tm), 1e-10);
}

TEST(TransitionMatrix, SectorRejectsNonConservingHamiltonian) {
  PauliSumHamiltonian h(2);
  h.add(1.0, "XI");
  EXPECT_THROW(build_transition_matrix(h, density_couplings(2), 1.0, 1.0, 0.1, 0), DomainError);
}

TEST(SpectralGap, TwoStateChainClosedForm) {
  const double a = 0.3, b = 0.15;
  TransitionMatrix tm;
  tm.T.resize(2, 2);
  tm.T << 1 - a, b, a, 1 - b;
  tm.beta = 1.0;
  tm.energies.resize(2);
  tm.energies << 0.0, std::log(b / a);
  EXPECT_NEAR(spectral_gap(tm).gap, a + b, 1e-14);
}

TEST(SpectralGap, IdentityChainIsReducible) {
  TransitionMatrix tm;
  tm.T = RealMatrix::Identity(3, 3);
  tm.energies = RealVector::Zero(3);
  try {
    spectral_gap(tm);
    FAIL() << "expected a reducibility error";
  } catch (const DegenerateError& e) {
    EXPECT_NE(std::string(e.what()).find("{0} {1} {2}"), std::string::npos) << e.what();
  }
}

TEST(SpectralGap, MatchesGeneralEigenvaluesAndIsPermutationInvariant) {
  const auto tm = chain4();
  const GapResult g = spectral_gap(tm);
  const auto ev = oracle::eigenvalues_general(tm.T.cast<cplx>());
  EXPECT_NEAR(g.second_eigenvalue, ev[ev.size() - 2], 1e-10);

  std::vector<Index> perm{3, 0, 5, 1, 4, 2};
  TransitionMatrix p = tm;
  for (Index i = 0; i < 6; ++i) {
    p.energies(i) = tm.energies(perm[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < 6; ++j) p.T(i, j) = tm.T(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  EXPECT_NEAR(spectral_gap(p).gap, g.gap, 1e-12);
}

TEST(GapSweep, InverseGapGrowsWithSize) {
  const auto rows = gap_sweep({4, 6, 8}, 1.0, 0.1, 1.0, 1.0, 0.1);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].dim_sector, 6);
  EXPECT_EQ(rows[1].dim_sector, 20);
  EXPECT_EQ(rows[2].dim_sector, 70);
  EXPECT_LT(rows[0].inverse_gap, rows[1].inverse_gap);
  EXPECT_LT(rows[1].inverse_gap, rows[2].inverse_gap);
  EXPECT_THROW(gap_sweep({5}, 1.0, 0.1, 1.0, 1.0, 0.1), DomainError);
  EXPECT_THROW(gap_sweep({}, 1.0, 0.1, 1.0, 1.0, 0.1), DomainError);
}

TEST(IterateChain, GibbsIsFixedAndZeroAlphaIsConstant) {
  const auto tm = chain4();
  const RealVector pi = tm.gibbs_weights();
  const auto tr = iterate_chain(tm, pi, 20);
  for (const auto& p : tr.distributions) EXPECT_LT((p - pi).cwiseAbs().maxCoeff(), 1e-12);
  RealVector p0 = RealVector::Zero(6);
  p0(5) = 1.0;
  const auto flat = iterate_chain(tm, p0, 10, 0.0);
  for (const auto& p : flat.distributions) EXPECT_EQ((p - p0).cwiseAbs().maxCoeff(), 0.0);
}

TEST(IterateChain, ConvergesMonotonicallyWithinMixingBound) {
  const auto tm = chain4();
  const double eps = 1e-6;
  const GapResult g = spectral_gap(tm);
  const int steps = static_cast<int>(std::ceil(10.0 / g.gap * std::log(1.0 / eps)));
  RealVector p0 = RealVector::Zero(6);
  p0(0) = 1.0;
  const auto tr = iterate_chain(tm, p0, steps);
  EXPECT_LE(tr.tv_to_gibbs.back(), eps);
  for (std::size_t i = 1; i < tr.tv_to_gibbs.size(); ++i) {
    EXPECT_LE(tr.tv_to_gibbs[i], tr.tv_to_gibbs[i - 1] + 1e-15);
  }
}

TEST(Quadrature, KnownIntegrals) {
  EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12).value, 2.0, 1e-12);
  EXPECT_NEAR(integrate([](double x) { return 1.0 / (x * x + 1e-6); }, -1.0, 1.0, 1e-10).value,
              2.0 / 1e-3 * std::atan(1.0 / 1e-3), 1e-8);
  EXPECT_NEAR(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-10).value, 2.0 / 3.0, 1e-9);
}

TEST(LemmaResidual, ZeroAtZeroDetuning) {
  EXPECT_EQ(lemma_s1_residual(0.0, 0.1, 10.0), 0.0);
}

TEST(LemmaResidual, MatchesUnsymmetrizedIntegral) {
  auto n = [](double x) { return 1.0 / (1.0 + std::exp(x)); };
  for (double z0 : {-3.0, -0.5, 1.0, 4.0}) {
    for (double g : {0.3, 1.0}) {
      const double W = 10.0;
      const double ref = simpson([&](double z) { return (n(z + z0) - n(z0)) / (z * z + g * g); }, -W, W, 200000);
      EXPECT_NEAR(lemma_s1_residual(z0, g, W), ref, 1e-8) << z0 << " " << g;
    }
  }
}

TEST(LemmaResidual, BoundedOnGrid) {
  double worst = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double z0 = -10.0 + 0.5 * i;
    for (double g : {1e-3, 1e-2, 0.1, 1.0}) {
      for (double W : {1.0, 10.0, 100.0}) worst = std::max(worst, std::abs(lemma_s1_residual(z0, g, W)));
    }
  }
  EXPECT_LE(worst, 0.45);
  EXPECT_LE(worst, 1.4045);
  EXPECT_GT(worst, 0.3);
}

}  // namespace
}  // namespace gibbsq
