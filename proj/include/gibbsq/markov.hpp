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

// Classical Metropolis-Hastings chain over the eigenstates of H.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "gibbsq/gibbs.hpp"
#include "gibbsq/hamiltonian.hpp"

namespace gibbsq {

/// Smooth step selecting |x| <= 1:
/// f(x) = (atan((Omega/gamma)(1 - x)) + atan((Omega/gamma)(1 + x))) / pi.
inline double window_f(double x, double Omega, double gamma) {
  if (!(Omega > 0.0) || !(gamma > 0.0)) throw DomainError("window needs Omega > 0 and gamma > 0");
  const double r = Omega / gamma;
  return (std::atan(r * (1.0 - x)) + std::atan(r * (1.0 + x))) / std::numbers::pi;
}

struct TransitionMatrix {
  RealMatrix T;  // column stochastic: T(mu, nu) is the rate nu -> mu
  RealVector energies;
  ComplexMatrix eigenvectors;  // full-register eigenvectors, one column per state
  double beta = 0.0;
  double Omega = 1.0;
  double gamma = 0.1;
  double C = 1.0;
  RealVector tau;  // off-diagonal column mass
  bool degenerate = false;
  std::optional<int> sector;  // total-Z eigenvalue the chain was restricted to

  Index size() const { return T.rows(); }

  RealVector gibbs_weights() const {
    RealVector p;
    detail::normalize_log_weights(-beta * energies, p);
    return p;
  }
};

/// n_i = (I + Z_i) / 2 for every site.
inline std::vector<ComplexMatrix> density_couplings(int qubits) {
  std::vector<ComplexMatrix> v;
  const Index dim = dim_of(qubits);
  for (int i = 0; i < qubits; ++i) {
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    for (Index j = 0; j < dim; ++j) m(j, j) = ((j >> i) & 1) ? 0.0 : 1.0;
    v.push_back(m);
  }
  return v;
}

namespace detail {

/// Eigenpairs of H inside the computational-basis block with total Z equal
/// to `target`, embedded back into the full register.
inline Spectrum sector_spectrum(const ComplexMatrix& h, int qubits, int target) {
  std::vector<Index> idx;
  for (Index j = 0; j < h.rows(); ++j) {
    if (qubits - 2 * std::popcount(static_cast<std::uint64_t>(j)) == target) idx.push_back(j);
  }
  if (idx.empty()) throw DomainError("empty symmetry sector total Z = " + std::to_string(target));
  const auto k = static_cast<Index>(idx.size());
  ComplexMatrix block(k, k);
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) block(a, b) = h(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
  }
  // Off-block elements must vanish for the restriction to be exact.
  double leak = 0.0;
  for (Index a : idx) {
    for (Index j = 0; j < h.rows(); ++j) {
      if (std::find(idx.begin(), idx.end(), j) == idx.end()) leak = std::max(leak, std::abs(h(a, j)));
    }
  }
  if (leak > 1e-12) throw DomainError("Hamiltonian does not conserve total Z; cannot restrict to a sector");
  const Spectrum local = herm_eig(block);
  Spectrum s;
  s.values = local.values;
  s.vectors = ComplexMatrix::Zero(h.rows(), k);
  for (Index a = 0; a < k; ++a) s.vectors.row(idx[static_cast<std::size_t>(a)]) = local.vectors.row(a);
  return s;
}

}  // namespace detail

/// T(mu, nu) = C sigma2(mu, nu) f((E_mu - E_nu) / Omega) / (1 + exp(beta (E_mu - E_nu)))
/// off the diagonal, with sigma2 the coupling-averaged |<mu|V|nu>|^2 and C fixed
/// so the largest off-diagonal column mass is 1.
inline TransitionMatrix build_transition_matrix(const ComplexMatrix& h,
                                                const std::vector<ComplexMatrix>& couplings,
                                                double beta, double Omega, double gamma,
                                                std::optional<int> sector = std::nullopt) {
  detail::check_beta(beta);
  if (!(Omega > 0.0) || !(gamma > 0.0)) throw DomainError("Omega and gamma must be positive");
  if (couplings.empty()) throw DomainError("transition matrix needs at least one coupling operator");
  const int n = qubits_of(h.rows());
  if (n < 0) throw DimensionError("Hamiltonian dimension is not a power of two");
  for (const auto& v : couplings) {
    if (v.rows() != h.rows() || v.cols() != h.cols()) throw DimensionError("coupling size mismatch");
    if (!is_hermitian(v, 1e-10)) throw DomainError("coupling operator is not Hermitian");
  }

  TransitionMatrix tm;
  tm.beta = beta;
  tm.Omega = Omega;
  tm.gamma = gamma;
  tm.sector = sector;
  const Spectrum s = sector ? detail::sector_spectrum(h, n, *sector) : herm_eig(h);
  if (sector) {
    const ComplexMatrix mz = total_z(n);
    for (Index mu = 0; mu < s.size(); ++mu) {
      const double m = (s.vectors.col(mu).adjoint() * mz * s.vectors.col(mu))(0, 0).real();
      if (std::abs(m - *sector) > 1e-8) throw DomainError("eigenvector left the requested sector");
    }
  }
  tm.energies = s.values;
  tm.eigenvectors = s.vectors;
  const Index k = s.size();

  RealMatrix sigma2 = RealMatrix::Zero(k, k);
  for (const auto& v : couplings) {
    const ComplexMatrix vm = s.vectors.adjoint() * v * s.vectors;
    sigma2 += vm.cwiseAbs2();
  }
  sigma2 /= static_cast<double>(couplings.size());

  RealMatrix raw = RealMatrix::Zero(k, k);
  for (Index nu = 0; nu < k; ++nu) {
    for (Index mu = 0; mu < k; ++mu) {
      if (mu == nu) continue;
      const double w = tm.energies(mu) - tm.energies(nu);
      raw(mu, nu) = sigma2(mu, nu) * window_f(w / Omega, Omega, gamma) * fermi(beta * w);
    }
  }
  const RealVector mass = raw.colwise().sum().transpose();
  const double top = k > 1 ? mass.maxCoeff() : 0.0;
  tm.degenerate = !(top > 0.0);
  tm.C = tm.degenerate ? 1.0 : 1.0 / top;
  tm.T = tm.C * raw;
  tm.tau = tm.C * mass;
  for (Index nu = 0; nu < k; ++nu) tm.T(nu, nu) = 1.0 - tm.tau(nu);
  return tm;
}

inline TransitionMatrix build_transition_matrix(const PauliSumHamiltonian& h,
                                                const std::vector<ComplexMatrix>& couplings,
                                                double beta, double Omega, double gamma,
                                                std::optional<int> sector = std::nullopt) {
  return build_transition_matrix(h.dense(), couplings, beta, Omega, gamma, sector);
}

/// Largest |T(mu,nu) pi(nu) - T(nu,mu) pi(mu)| over pairs.
inline double detailed_balance_residual(const TransitionMatrix& tm) {
  const RealVector pi = tm.gibbs_weights();
  double worst = 0.0;
  for (Index nu = 0; nu < tm.size(); ++nu) {
    for (Index mu = 0; mu < nu; ++mu) {
      worst = std::max(worst, std::abs(tm.T(mu, nu) * pi(nu) - tm.T(nu, mu) * pi(mu)));
    }
  }
  return worst;
}

/// Connected components of the graph with an edge wherever either direction
/// has a non-negligible rate.
inline std::vector<std::vector<Index>> communicating_blocks(const RealMatrix& T) {
  const Index k = T.rows();
  const double thresh = 1e-12 * std::max(1e-300, T.cwiseAbs().maxCoeff());
  std::vector<int> label(static_cast<std::size_t>(k), -1);
  std::vector<std::vector<Index>> blocks;
  for (Index root = 0; root < k; ++root) {
    if (label[static_cast<std::size_t>(root)] >= 0) continue;
    const int id = static_cast<int>(blocks.size());
    blocks.emplace_back();
    std::vector<Index> stack{root};
    label[static_cast<std::size_t>(root)] = id;
    while (!stack.empty()) {
      const Index a = stack.back();
      stack.pop_back();
      blocks.back().push_back(a);
      for (Index b = 0; b < k; ++b) {
        if (label[static_cast<std::size_t>(b)] < 0 && (T(a, b) > thresh || T(b, a) > thresh)) {
          label[static_cast<std::size_t>(b)] = id;
          stack.push_back(b);
        }
      }
    }
    std::sort(blocks.back().begin(), blocks.back().end());
  }
  return blocks;
}

struct GapResult {
  double gap = 0.0;
  double second_eigenvalue = 0.0;
};

/// Gap 1 - lambda_2, where lambda_2 is the second largest eigenvalue of the
/// symmetrized chain D^{-1/2} T D^{1/2}.
inline GapResult spectral_gap(const TransitionMatrix& tm) {
  if (tm.size() < 2) throw DegenerateError("chain with a single state has no gap");
  const auto blocks = communicating_blocks(tm.T);
  if (blocks.size() > 1) {
    std::string msg = "transition matrix is reducible; blocks:";
    for (const auto& b : blocks) {
      msg += " {";
      for (std::size_t i = 0; i < b.size(); ++i) msg += (i ? "," : "") + std::to_string(b[i]);
      msg += "}";
    }
    throw DegenerateError(msg);
  }
  const RealVector pi = tm.gibbs_weights();
  const RealVector root = pi.cwiseSqrt();
  RealMatrix S = root.cwiseInverse().asDiagonal() * tm.T * root.asDiagonal();
  S = 0.5 * (S + S.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(S, Eigen::EigenvaluesOnly);
  const RealVector ev = solver.eigenvalues();
  GapResult g;
  g.second_eigenvalue = ev(ev.size() - 2);
  g.gap = 1.0 - g.second_eigenvalue;
  return g;
}

/// Null vector of T - I, normalized to a probability vector.
inline RealVector steady_state(const TransitionMatrix& tm) {
  const RealMatrix a = tm.T - RealMatrix::Identity(tm.size(), tm.size());
  Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeFullV);
  RealVector v = svd.matrixV().col(tm.size() - 1);
  if (v.sum() < 0) v = -v;
  v = v.cwiseMax(0.0);
  return v / v.sum();
}

inline double total_variation(const RealVector& p, const RealVector& q) {
  return 0.5 * (p - q).cwiseAbs().sum();
}

/// alpha = n_a lambda^2 / (gamma Omega C).
inline double lumped_alpha(int n_ancilla, double lambda, double gamma, double Omega, double C) {
  return n_ancilla * lambda * lambda / (gamma * Omega * C);
}

struct ChainTrajectory {
  std::vector<RealVector> distributions;  // entry 0 is p0
  std::vector<double> tv_to_gibbs;
};

/// Repeated application of (1 - alpha) I + alpha T.
inline ChainTrajectory iterate_chain(const TransitionMatrix& tm, const RealVector& p0, int steps,
                                     double alpha = 1.0) {
  if (p0.size() != tm.size()) throw DimensionError("initial distribution has the wrong length");
  if (p0.minCoeff() < 0.0 || std::abs(p0.sum() - 1.0) > 1e-10) {
    throw DomainError("initial distribution must be non-negative and sum to 1");
  }
  if (steps < 0) throw DomainError("step count must be non-negative");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  const RealVector pi = tm.gibbs_weights();
  const RealMatrix V = (1.0 - alpha) * RealMatrix::Identity(tm.size(), tm.size()) + alpha * tm.T;
  ChainTrajectory tr;
  RealVector p = p0;
  tr.distributions.push_back(p);
  tr.tv_to_gibbs.push_back(total_variation(p, pi));
  for (int s = 0; s < steps; ++s) {
    p = V * p;
    tr.distributions.push_back(p);
    tr.tv_to_gibbs.push_back(total_variation(p, pi));
  }
  return tr;
}

struct GapRow {
  int n = 0;
  Index dim_sector = 0;
  double gap = 0.0;
  double inverse_gap = 0.0;
};

/// Inverse-gap sweep over chain lengths at half filling with density couplings.
inline std::vector<GapRow> gap_sweep(const std::vector<int>& sizes, double J, double U, double beta,
                                     double Omega, double gamma) {
  if (sizes.empty()) throw DomainError("gap sweep needs at least one size");
  std::vector<GapRow> rows;
  for (int n : sizes) {
    if (n < 2 || n % 2 != 0) throw DomainError("half filling needs an even chain length >= 2");
    const auto h = hardcore_bose_hubbard_1d(n, J, U);
    const auto tm = build_transition_matrix(h, density_couplings(n), beta, Omega, gamma, 0);
    const GapResult g = spectral_gap(tm);
    rows.push_back({n, tm.size(), g.gap, 1.0 / g.gap});
  }
  return rows;
}

}  // namespace gibbsq
