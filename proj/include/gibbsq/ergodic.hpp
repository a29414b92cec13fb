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

// Ergodic bath-coupling simulator.
//
// Register layout: system qubits occupy indices 0..n-1 and ancilla m sits at
// index n + m, so a product state rho (x) sigma is stored as kron(sigma, rho).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gibbsq/gibbs.hpp"
#include "gibbsq/noise.hpp"
#include "gibbsq/parallel.hpp"
#include "gibbsq/record.hpp"
#include "gibbsq/rng.hpp"

namespace gibbsq {

enum class LambdaSchedule { kConstant, kLinearDecay };

struct ErgodicConfig {
  PauliSumHamiltonian hamiltonian;
  int n_ancilla = 1;
  double beta = 1.0;
  double lambda = 0.1;
  double gamma = 0.1;
  double omega = 1.0;  // frequency range Omega
  int cycles = 20;
  int samples = 1000;
  std::uint64_t seed = 1;
  double noise_rate = 0.0;       // Gamma; depolarizing p = Gamma * t after each cycle
  std::vector<int> ancilla_map;  // system qubit coupled to ancilla m; empty means m -> m
  LambdaSchedule schedule = LambdaSchedule::kConstant;
  unsigned threads = 0;
  bool keep_records = false;

  int system_qubits() const { return hamiltonian.qubits(); }

  int coupled_qubit(int m) const {
    return ancilla_map.empty() ? m : ancilla_map[static_cast<std::size_t>(m)];
  }

  double lambda_at(int cycle) const {  // cycle counts from 1
    if (schedule == LambdaSchedule::kConstant) return lambda;
    return lambda * (1.0 - static_cast<double>(cycle - 1) / cycles);
  }

  void validate() const {
    const int n = system_qubits();
    if (n < 1) throw DomainError("ergodic config needs a system Hamiltonian");
    if (n_ancilla < 1) throw DomainError("n_ancilla must be at least 1");
    if (n + n_ancilla > kMaxQubits) {
      throw DimensionError("system plus ancilla exceeds " + std::to_string(kMaxQubits) + " qubits");
    }
    detail::check_beta(beta);
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be >= 0");
    if (!(gamma > 0.0) || !(omega > 0.0)) {
      throw DomainError("gamma and Omega must be positive");
    }
    if (cycles < 1) throw DomainError("cycle count must be at least 1");
    if (samples < 1) throw DomainError("sample count must be at least 1");
    if (!(noise_rate >= 0.0) || !std::isfinite(noise_rate)) throw DomainError("noise rate must be >= 0");
    if (!ancilla_map.empty()) {
      if (static_cast<int>(ancilla_map.size()) != n_ancilla) {
        throw DomainError("ancilla_map needs one entry per ancilla");
      }
      for (int s : ancilla_map) {
        if (s < 0 || s >= n) throw DimensionError("ancilla_map entry out of range");
      }
    } else if (n_ancilla > n) {
      throw DomainError("default ancilla map needs n_ancilla <= system qubits");
    }
  }
};

struct CycleDraw {
  double t = 0.0;
  std::vector<double> omegas;
  std::vector<double> a;  // coefficient of X on the coupled system qubit
  std::vector<double> b;  // coefficient of Z on the coupled system qubit
};

inline CycleDraw draw_cycle(Stream& rng, const ErgodicConfig& cfg) {
  CycleDraw d;
  d.t = rng.exponential(cfg.gamma);
  for (int m = 0; m < cfg.n_ancilla; ++m) {
    d.omegas.push_back(rng.uniform(-cfg.omega, cfg.omega));
    d.a.push_back(rng.normal());
    d.b.push_back(rng.normal());
  }
  return d;
}

/// Diagonal of the ancilla thermal product state; ancilla m is bit m.
inline RealVector ancilla_thermal_diagonal(double beta, const std::vector<double>& omegas) {
  const Index dim = dim_of(static_cast<int>(omegas.size()));
  RealVector p = RealVector::Ones(dim);
  for (Index k = 0; k < dim; ++k) {
    for (std::size_t m = 0; m < omegas.size(); ++m) {
      const double x = beta * omegas[m];
      p(k) *= ((k >> m) & 1) ? fermi(-x) : fermi(x);
    }
  }
  return p;
}

inline DensityMatrix ancilla_thermal_state(double beta, const std::vector<double>& omegas) {
  for (double w : omegas) {
    if (!std::isfinite(w) || !std::isfinite(beta)) throw DomainError("non-finite ancilla parameter");
  }
  const RealVector p = ancilla_thermal_diagonal(beta, omegas);
  return DensityMatrix::unchecked(p.cast<cplx>().asDiagonal().toDenseMatrix());
}

/// Embedded operators reused by every cycle of one configuration.
class ErgodicOperators {
 public:
  explicit ErgodicOperators(const ErgodicConfig& cfg)
      : n_(cfg.system_qubits()), na_(cfg.n_ancilla) {
    const int total = n_ + na_;
    std::vector<int> sys(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) sys[static_cast<std::size_t>(i)] = i;
    h_sys_ = kron_embed(cfg.hamiltonian.dense(), sys, total);
    const ComplexMatrix X = pauli::X(), Z = pauli::Z();
    const ComplexMatrix XX = kron(X, X), ZX = kron(X, Z);  // bit 0 = system, bit 1 = ancilla
    for (int m = 0; m < na_; ++m) {
      const int a = n_ + m;
      const int s = cfg.coupled_qubit(m);
      z_anc_.push_back(kron_embed(Z, {a}, total));
      x_couple_.push_back(kron_embed(XX, {s, a}, total));
      z_couple_.push_back(kron_embed(ZX, {s, a}, total));
    }
    real_ = h_sys_.imag().cwiseAbs().maxCoeff() == 0.0;
  }

  int system_qubits() const { return n_; }
  int ancilla_qubits() const { return na_; }

  ComplexMatrix cycle_hamiltonian(const CycleDraw& d, double lambda) const {
    ComplexMatrix h = h_sys_;
    for (int m = 0; m < na_; ++m) {
      const auto k = static_cast<std::size_t>(m);
      h += 0.5 * d.omegas[k] * z_anc_[k];
      h += lambda * (d.a[k] * x_couple_[k] + d.b[k] * z_couple_[k]);
    }
    return h;
  }

  /// exp(-i H t); uses the real symmetric solver when H is real.
  ComplexMatrix evolution(const CycleDraw& d, double lambda) const {
    const ComplexMatrix h = cycle_hamiltonian(d, lambda);
    if (d.t == 0.0) return identity(h.rows());
    if (real_) {
      Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h.real());
      const RealMatrix& v = solver.eigenvectors();
      const RealVector angle = solver.eigenvalues() * d.t;
      ComplexMatrix u(h.rows(), h.cols());
      u.real() = v * angle.array().cos().matrix().asDiagonal() * v.transpose();
      u.imag() = -(v * angle.array().sin().matrix().asDiagonal() * v.transpose());
      return u;
    }
    return unitary_of(h, d.t);
  }

  /// Tr_a( U (rho (x) sigma) U^dagger ) for a diagonal ancilla state sigma.
  ComplexMatrix apply(const ComplexMatrix& rho, const CycleDraw& d, double beta,
                      double lambda) const {
    const ComplexMatrix u = evolution(d, lambda);
    const RealVector sigma = ancilla_thermal_diagonal(beta, d.omegas);
    const Index sd = rho.rows();
    ComplexMatrix out = ComplexMatrix::Zero(sd, sd);
    for (Index k = 0; k < sigma.size(); ++k) {
      if (sigma(k) == 0.0) continue;
      // Columns k*sd .. k*sd+sd-1 of U act on the ancilla basis state |k>.
      const ComplexMatrix uk = u.middleCols(k * sd, sd);
      const ComplexMatrix full = sigma(k) * uk * rho * uk.adjoint();
      out += trace_out_high(full, n_);
    }
    return out;
  }

 private:
  int n_, na_;
  bool real_ = false;
  ComplexMatrix h_sys_;
  std::vector<ComplexMatrix> z_anc_, x_couple_, z_couple_;
};

/// One cycle of the channel for a fixed draw, without noise. `cycle` selects
/// the coupling strength under a decaying schedule.
inline DensityMatrix cycle_channel(const DensityMatrix& rho, const ErgodicConfig& cfg,
                                   const CycleDraw& draw, int cycle = 1) {
  cfg.validate();
  if (rho.qubits() != cfg.system_qubits()) throw DimensionError("state does not match system size");
  const ErgodicOperators ops(cfg);
  return DensityMatrix::unchecked(ops.apply(rho.matrix(), draw, cfg.beta, cfg.lambda_at(cycle)));
}

struct ErgodicResult {
  DensityMatrix mean_state;
  Spectrum spectrum;
  RealVector eigen_probs;
  RealVector eigen_probs_stderr;
  RealVector exact_probs;
  double energy = 0.0;
  double energy_stderr = 0.0;
  double exact_energy = 0.0;
  std::vector<double> per_cycle_trace_distance;  // entry k is after cycle k+1
  std::vector<double> per_cycle_energy;
  std::vector<RunRecord> records;
};

inline ErgodicResult run_ergodic(const ErgodicConfig& cfg) {
  cfg.validate();
  const int n = cfg.system_qubits();
  const Index sd = dim_of(n);
  const ErgodicOperators ops(cfg);
  const ComplexMatrix h = cfg.hamiltonian.dense();
  const GibbsState gibbs = exact_gibbs(herm_eig(h), cfg.beta);
  const Spectrum& spec = gibbs.spectrum;

  struct Partial {
    std::vector<ComplexMatrix> cycle_sum;  // summed states after each cycle
    RealVector prob_sum, prob_sq;
    double energy_sq = 0.0;
    std::vector<RunRecord> records;
  };
  const auto d = static_cast<std::size_t>(cfg.cycles);

  auto work = [&](std::size_t begin, std::size_t end) {
    Partial p;
    p.cycle_sum.assign(d, ComplexMatrix::Zero(sd, sd));
    p.prob_sum = RealVector::Zero(sd);
    p.prob_sq = RealVector::Zero(sd);
    for (std::size_t s = begin; s < end; ++s) {
      Stream rng(cfg.seed, s);
      RunRecord rec;
      rec.sample_index = s;
      rec.seed = cfg.seed;
      rec.initial_state = rng.below(static_cast<std::uint64_t>(sd));
      ComplexMatrix rho = ComplexMatrix::Zero(sd, sd);
      rho(static_cast<Index>(rec.initial_state), static_cast<Index>(rec.initial_state)) = 1.0;
      for (int k = 1; k <= cfg.cycles; ++k) {
        const CycleDraw draw = draw_cycle(rng, cfg);
        rho = ops.apply(rho, draw, cfg.beta, cfg.lambda_at(k));
        if (cfg.noise_rate > 0.0) {
          const double pk = std::min(0.25, cfg.noise_rate * draw.t);
          for (int q = 0; q < n; ++q) detail::depolarize_inplace(rho, q, pk);
        }
        p.cycle_sum[static_cast<std::size_t>(k - 1)] += rho;
        if (cfg.keep_records) {
          rec.parameters.push_back(draw.t);
          for (int m = 0; m < cfg.n_ancilla; ++m) {
            const auto mi = static_cast<std::size_t>(m);
            rec.parameters.insert(rec.parameters.end(), {draw.omegas[mi], draw.a[mi], draw.b[mi]});
          }
        }
      }
      const RealVector pops = populations(DensityMatrix::unchecked(rho), spec.vectors);
      p.prob_sum += pops;
      p.prob_sq += pops.cwiseProduct(pops);
      const double e = pops.dot(spec.values);
      p.energy_sq += e * e;
      if (cfg.keep_records) {
        rec.eigen_probs = pops;
        p.records.push_back(std::move(rec));
      }
    }
    return p;
  };
  auto combine = [](Partial acc, Partial part) {
    if (acc.cycle_sum.empty()) return part;
    for (std::size_t k = 0; k < acc.cycle_sum.size(); ++k) acc.cycle_sum[k] += part.cycle_sum[k];
    acc.prob_sum += part.prob_sum;
    acc.prob_sq += part.prob_sq;
    acc.energy_sq += part.energy_sq;
    for (auto& r : part.records) acc.records.push_back(std::move(r));
    return acc;
  };
  const auto samples = static_cast<std::size_t>(cfg.samples);
  Partial total = ordered_block_reduce(samples, 16, cfg.threads, work, combine, Partial{});

  const double N = static_cast<double>(samples);
  ErgodicResult r;
  r.spectrum = spec;
  r.exact_probs = gibbs.eigen_probs;
  r.exact_energy = gibbs.eigen_probs.dot(spec.values);
  for (const auto& sum : total.cycle_sum) {
    const DensityMatrix mean = DensityMatrix::unchecked(sum / N);
    r.per_cycle_trace_distance.push_back(trace_distance(mean, gibbs.rho));
    r.per_cycle_energy.push_back(mean.expectation(h));
  }
  r.mean_state = DensityMatrix::unchecked(total.cycle_sum.back() / N);
  r.eigen_probs = total.prob_sum / N;
  r.energy = r.per_cycle_energy.back();
  const RealVector var = (total.prob_sq / N - r.eigen_probs.cwiseProduct(r.eigen_probs)).cwiseMax(0.0);
  r.eigen_probs_stderr = samples > 1 ? RealVector((var * N / (N - 1.0) / N).cwiseSqrt())
                                     : RealVector::Zero(sd);
  const double evar = std::max(0.0, total.energy_sq / N - r.energy * r.energy);
  r.energy_stderr = samples > 1 ? std::sqrt(evar / (N - 1.0)) : 0.0;
  r.records = std::move(total.records);
  return r;
}

}  // namespace gibbsq
