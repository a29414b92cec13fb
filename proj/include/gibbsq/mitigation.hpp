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

// Noise mitigation by minimizing the free energy of the simulated output
// over the circuit's random parameters, with those parameters frozen.

#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "gibbsq/ergodic.hpp"
#include "gibbsq/optimize.hpp"
#include "gibbsq/universal.hpp"

namespace gibbsq {

/// F(rho) = Tr(rho H) - S(rho) / beta.
inline double free_energy(const DensityMatrix& rho, const ComplexMatrix& h, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("free energy needs beta > 0");
  return rho.expectation(h) - von_neumann_entropy(rho) / beta;
}

inline double free_energy(const DensityMatrix& rho, const PauliSumHamiltonian& h, double beta) {
  return free_energy(rho, h.dense(), beta);
}

/// Universal circuit in the fixed-angle mode; the angles are the variables.
struct UniversalMitigation {
  UniversalConfig config;
};

/// One frozen ergodic draw sequence started from I / 2^n; the ancilla
/// frequencies (and optionally the coupling coefficients) are the variables.
struct ErgodicMitigation {
  ErgodicConfig config;
  bool adjust_couplings = false;
};

struct MitigationProblem {
  std::variant<UniversalMitigation, ErgodicMitigation> base;
  int budget = 500;
  std::uint64_t seed = 1;  // optimizer restarts; the frozen circuit uses the config seed
  double initial_step = 0.5;
};

struct TrajectoryPoint {
  int evaluation_index = 0;
  double free_energy = 0.0;
  double trace_distance_to_gibbs = 0.0;
};

struct MitigationResult {
  std::vector<std::string> param_names;
  std::vector<double> initial_params;
  std::vector<double> best_params;
  DensityMatrix initial_state;
  DensityMatrix best_state;
  double F_before = 0.0;
  double F_after = 0.0;
  double F_gibbs = 0.0;  // -log(Z) / beta, the lower bound
  double trace_distance_before = 0.0;
  double trace_distance_after = 0.0;
  bool no_improvement = false;
  int evaluations = 0;
  std::vector<TrajectoryPoint> trajectory;
  Spectrum spectrum;
  RealVector exact_probs;
};

namespace detail {

struct Objective {
  std::function<DensityMatrix(const std::vector<double>&)> state;
  std::vector<double> x0;
  std::vector<std::string> names;
  std::vector<double> lower, upper;
  PauliSumHamiltonian h;
  double beta = 1.0;
};

inline Objective universal_objective(const UniversalMitigation& p) {
  const UniversalConfig& cfg = p.config;
  cfg.validate();
  Objective o;
  o.h = cfg.hamiltonian;
  o.beta = cfg.beta;
  const GateSchedule sched = build_schedule(cfg.hamiltonian, cfg.undivided);
  const std::size_t M = static_cast<std::size_t>(sched.size());
  o.x0 = draw_angles(cfg.seed, 0, M * static_cast<std::size_t>(cfg.cycles));
  for (int k = 0; k < cfg.cycles; ++k) {
    for (std::size_t m = 0; m < M; ++m) {
      o.names.push_back("theta[" + std::to_string(k) + "][" + std::to_string(m) + "]");
    }
  }
  const int n = cfg.hamiltonian.qubits();
  o.state = [sched, n, cfg](const std::vector<double>& angles) {
    const ComplexMatrix r = accepted_unnormalized(sched, n, cfg.beta, cfg.cycles, angles, cfg.noise);
    const double prob = r.trace().real();
    if (!(prob > 1e-300)) throw DegenerateError("angle set has zero acceptance probability");
    return DensityMatrix::unchecked(r / prob);
  };
  return o;
}

inline Objective ergodic_objective(const ErgodicMitigation& p) {
  const ErgodicConfig& cfg = p.config;
  cfg.validate();
  Objective o;
  o.h = cfg.hamiltonian;
  o.beta = cfg.beta;
  Stream rng(cfg.seed, 0);
  std::vector<CycleDraw> draws;
  for (int k = 0; k < cfg.cycles; ++k) draws.push_back(draw_cycle(rng, cfg));
  for (int k = 0; k < cfg.cycles; ++k) {
    for (int m = 0; m < cfg.n_ancilla; ++m) {
      const auto mi = static_cast<std::size_t>(m);
      const std::string tag = "[" + std::to_string(k) + "][" + std::to_string(m) + "]";
      o.x0.push_back(draws[static_cast<std::size_t>(k)].omegas[mi]);
      o.names.push_back("omega" + tag);
      o.lower.push_back(-cfg.omega);
      o.upper.push_back(cfg.omega);
      if (p.adjust_couplings) {
        o.x0.push_back(draws[static_cast<std::size_t>(k)].a[mi]);
        o.x0.push_back(draws[static_cast<std::size_t>(k)].b[mi]);
        o.names.push_back("a" + tag);
        o.names.push_back("b" + tag);
        const double inf = std::numeric_limits<double>::infinity();
        o.lower.insert(o.lower.end(), {-inf, -inf});
        o.upper.insert(o.upper.end(), {inf, inf});
      }
    }
  }
  auto ops = std::make_shared<ErgodicOperators>(cfg);
  const bool couplings = p.adjust_couplings;
  o.state = [ops, draws, cfg, couplings](const std::vector<double>& x) {
    const int n = cfg.system_qubits();
    const Index dim = dim_of(n);
    ComplexMatrix rho = identity(dim) / static_cast<double>(dim);
    std::size_t at = 0;
    for (int k = 1; k <= cfg.cycles; ++k) {
      CycleDraw d = draws[static_cast<std::size_t>(k - 1)];
      for (int m = 0; m < cfg.n_ancilla; ++m) {
        const auto mi = static_cast<std::size_t>(m);
        d.omegas[mi] = x[at++];
        if (couplings) {
          d.a[mi] = x[at++];
          d.b[mi] = x[at++];
        }
      }
      rho = ops->apply(rho, d, cfg.beta, cfg.lambda_at(k));
      if (cfg.noise_rate > 0.0) {
        const double pk = std::min(0.25, cfg.noise_rate * d.t);
        for (int q = 0; q < n; ++q) depolarize_inplace(rho, q, pk);
      }
    }
    return DensityMatrix::unchecked(rho);
  };
  return o;
}

}  // namespace detail

inline MitigationResult optimize(const MitigationProblem& problem) {
  const detail::Objective o = std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, UniversalMitigation>) return detail::universal_objective(p);
        else return detail::ergodic_objective(p);
      },
      problem.base);
  if (o.x0.empty()) throw DomainError("mitigation problem has no adjustable parameters");
  if (problem.budget < 1) throw DomainError("mitigation budget must be at least 1");

  const ComplexMatrix h = o.h.dense();
  const GibbsState gibbs = exact_gibbs(herm_eig(h), o.beta);
  MitigationResult r;
  r.param_names = o.names;
  r.initial_params = o.x0;
  r.spectrum = gibbs.spectrum;
  r.exact_probs = gibbs.eigen_probs;
  r.F_gibbs = -gibbs.log_partition / o.beta;

  auto objective = [&](const std::vector<double>& x) {
    const DensityMatrix rho = o.state(x);
    const double F = free_energy(rho, h, o.beta);
    r.trajectory.push_back({static_cast<int>(r.trajectory.size()), F, trace_distance(rho, gibbs.rho)});
    return F;
  };
  PatternSearchOptions opt;
  opt.budget = problem.budget;
  opt.seed = problem.seed;
  opt.initial_step = problem.initial_step;
  opt.lower = o.lower;
  opt.upper = o.upper;
  const PatternSearchResult best = pattern_search(objective, o.x0, opt);

  r.best_params = best.x;
  r.evaluations = best.evaluations;
  r.initial_state = o.state(o.x0);
  r.best_state = o.state(best.x);
  r.F_before = best.initial_value;
  r.F_after = best.value;
  r.no_improvement = !(best.value < best.initial_value);
  r.trace_distance_before = trace_distance(r.initial_state, gibbs.rho);
  r.trace_distance_after = trace_distance(r.best_state, gibbs.rho);
  return r;
}

}  // namespace gibbsq
