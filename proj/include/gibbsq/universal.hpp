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

// Universal algorithm: post-selected random-angle gates.
//
// Each gate couples a positive term h to a fresh |0> ancilla through
// exp(i theta sqrt(beta h / d) (x) X) and keeps the branch where the ancilla
// reads 0. On the system this is rho -> K rho K with K = cos(theta sqrt(beta h / d)).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "gibbsq/gibbs.hpp"
#include "gibbsq/noise.hpp"
#include "gibbsq/parallel.hpp"
#include "gibbsq/record.hpp"
#include "gibbsq/rng.hpp"

namespace gibbsq {

enum class Mode { kRerandomizeAlways = 1, kRerandomizeOnAccept = 2, kFixedAngles = 3 };

struct GateNoise {
  double p2 = 0.0;  // per system qubit after a gate touching one system qubit
  double p3 = 0.0;  // per system qubit after a gate touching two system qubits

  bool enabled() const { return p2 > 0.0 || p3 > 0.0; }
};

/// A positive generator. Projector terms use closed forms; a dense term is
/// an arbitrary PSD operator on the whole register.
struct MonitoredGate {
  std::variant<PositiveTerm, ComplexMatrix> generator;
  std::vector<int> support;

  bool is_projector() const { return std::holds_alternative<PositiveTerm>(generator); }
};

struct UniversalConfig {
  PauliSumHamiltonian hamiltonian;
  double beta = 1.0;
  int cycles = 5;
  Mode mode = Mode::kRerandomizeAlways;
  int samples = 1000;
  std::uint64_t seed = 1;
  GateNoise noise;
  bool undivided = false;  // one global gate per cycle (M = 1)
  unsigned threads = 0;
  bool keep_records = false;

  void validate() const {
    if (hamiltonian.qubits() < 1) throw DomainError("universal config needs a Hamiltonian");
    detail::check_beta(beta);
    if (cycles < 1) throw DomainError("cycle count must be at least 1");
    if (samples < 1) throw DomainError("sample count must be at least 1");
    detail::check_depolarizing_p(noise.p2);
    detail::check_depolarizing_p(noise.p3);
  }
};

/// Positive terms ordered as all-X strings, then all-Y, then the rest.
inline std::vector<PositiveTerm> cycle_order(const PositiveDecomposition& d) {
  auto rank = [](const PositiveTerm& t) {
    const std::string s = t.pauli.support_letters();
    if (s.find_first_not_of('X') == std::string::npos) return 0;
    if (s.find_first_not_of('Y') == std::string::npos) return 1;
    return 2;
  };
  std::vector<PositiveTerm> out = d.terms;
  std::stable_sort(out.begin(), out.end(),
                   [&](const PositiveTerm& a, const PositiveTerm& b) { return rank(a) < rank(b); });
  return out;
}

/// Gates of one cycle and the identity shift that makes them positive.
struct GateSchedule {
  std::vector<MonitoredGate> gates;
  double shift = 0.0;

  int size() const { return static_cast<int>(gates.size()); }
};

inline GateSchedule build_schedule(const PauliSumHamiltonian& h, bool undivided) {
  GateSchedule s;
  const int n = h.qubits();
  if (undivided) {
    const ComplexMatrix dense = h.dense();
    // The gate needs sqrt(H); lift the spectrum only when it dips below zero.
    const double lift = std::max(0.0, -herm_eig(dense).values(0));
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) all[static_cast<std::size_t>(q)] = q;
    s.shift = lift;
    s.gates.push_back({dense + lift * identity(dense.rows()), all});
    return s;
  }
  const PositiveDecomposition d = positive_decomposition(h);
  s.shift = d.shift;
  for (const auto& t : cycle_order(d)) s.gates.push_back({t, t.support()});
  return s;
}

namespace detail {

/// rho -> P rho, rho P and P rho P for a Pauli string, without dense products.
struct PauliAction {
  std::uint64_t x;
  const PauliString* p;

  ComplexMatrix left(const ComplexMatrix& m) const {
    ComplexMatrix out(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i) {
      const auto src = static_cast<std::uint64_t>(i) ^ x;
      out.row(i) = p->phase(src) * m.row(static_cast<Index>(src));
    }
    return out;
  }

  ComplexMatrix right(const ComplexMatrix& m) const {
    ComplexMatrix out(m.rows(), m.cols());
    for (Index j = 0; j < m.cols(); ++j) {
      const auto src = static_cast<std::uint64_t>(j) ^ x;
      out.col(j) = p->phase(static_cast<std::uint64_t>(j)) * m.col(static_cast<Index>(src));
    }
    return out;
  }
};

/// K rho K for K = a I + b P.
inline ComplexMatrix sandwich(const ComplexMatrix& rho, const PauliString& p, double a, double b) {
  const PauliAction act{p.x_mask(), &p};
  const ComplexMatrix pr = act.left(rho);
  return a * a * rho + a * b * (pr + act.right(rho)) + b * b * act.right(pr);
}

inline double gate_speed(double beta, int d, double scale) {
  return std::sqrt(beta * scale / static_cast<double>(d));
}

inline void apply_gate_noise(ComplexMatrix& rho, const MonitoredGate& g, const GateNoise& noise) {
  if (!noise.enabled()) return;
  double p = 0.0;
  if (g.support.size() == 1) {
    p = noise.p2;
  } else if (g.support.size() == 2) {
    p = noise.p3;
  } else {
    throw DomainError("gate noise is defined for gates on one or two system qubits, got " +
                      std::to_string(g.support.size()));
  }
  for (int q : g.support) depolarize_inplace(rho, q, p);
}

}  // namespace detail

/// Post-selected action of one gate: K rho K with K = cos(theta sqrt(beta h / d)).
/// The trace of the result is the acceptance probability times the input trace.
inline ComplexMatrix monitored_gate(const ComplexMatrix& rho, const MonitoredGate& g, double theta,
                                    double beta, int d) {
  if (const auto* t = std::get_if<PositiveTerm>(&g.generator)) {
    // K = I - Pi + cos(theta v) Pi = a I + b P with Pi = (I + s P)/2.
    const double c = std::cos(theta * detail::gate_speed(beta, d, t->scale));
    return detail::sandwich(rho, t->pauli, 0.5 * (1.0 + c), -0.5 * t->sign * (1.0 - c));
  }
  const auto& h = std::get<ComplexMatrix>(g.generator);
  const Spectrum s = herm_eig(h);
  const ComplexMatrix k = spectral_function(s, [&](double e) {
    return cplx(std::cos(theta * detail::gate_speed(beta, d, std::max(0.0, e))), 0.0);
  });
  return k * rho * k;
}

inline DensityMatrix monitored_gate_channel(const DensityMatrix& rho, const PositiveTerm& term,
                                            double theta, double beta, int d) {
  if (term.pauli.qubits() != rho.qubits()) throw DimensionError("term does not match the state");
  return DensityMatrix::unchecked(monitored_gate(rho.matrix(), {term, term.support()}, theta, beta, d));
}

/// Average of K rho K over theta ~ N(0, 1), using E cos(x theta) = exp(-x^2 / 2).
inline ComplexMatrix averaged_monitored_gate(const ComplexMatrix& rho, const MonitoredGate& g,
                                             double beta, int d) {
  if (const auto* t = std::get_if<PositiveTerm>(&g.generator)) {
    const double v = detail::gate_speed(beta, d, t->scale);
    const double ec = std::exp(-0.5 * v * v);
    const double ec2 = 0.5 * (1.0 + std::exp(-2.0 * v * v));
    const double aa = 0.25 * (1.0 + 2.0 * ec + ec2);
    const double ab = -0.25 * t->sign * (1.0 - ec2);
    const double bb = 0.25 * (1.0 - 2.0 * ec + ec2);
    const detail::PauliAction act{t->pauli.x_mask(), &t->pauli};
    const ComplexMatrix pr = act.left(rho);
    return aa * rho + ab * (pr + act.right(rho)) + bb * act.right(pr);
  }
  // E cos(x t) cos(y t) = (exp(-(x - y)^2 / 2) + exp(-(x + y)^2 / 2)) / 2 in the eigenbasis of h.
  const Spectrum s = herm_eig(std::get<ComplexMatrix>(g.generator));
  const Index n = s.size();
  RealVector x(n);
  for (Index i = 0; i < n; ++i) x(i) = detail::gate_speed(beta, d, std::max(0.0, s.values(i)));
  ComplexMatrix r = s.vectors.adjoint() * rho * s.vectors;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double dm = x(i) - x(j), dp = x(i) + x(j);
      r(i, j) *= 0.5 * (std::exp(-0.5 * dm * dm) + std::exp(-0.5 * dp * dp));
    }
  }
  return s.vectors * r * s.vectors.adjoint();
}

/// Unnormalized accepted state of one angle set, starting from I / 2^n.
/// `angles` is cycle-major: angles[k * M + m].
inline ComplexMatrix accepted_unnormalized(const GateSchedule& sched, int qubits, double beta, int d,
                                           const std::vector<double>& angles,
                                           const GateNoise& noise = {}) {
  const auto M = static_cast<std::size_t>(sched.size());
  if (angles.size() != M * static_cast<std::size_t>(d)) {
    throw DimensionError("angle set has " + std::to_string(angles.size()) + " entries, expected " +
                         std::to_string(M * static_cast<std::size_t>(d)));
  }
  const Index dim = dim_of(qubits);
  ComplexMatrix rho = identity(dim) / static_cast<double>(dim);
  for (int k = 0; k < d; ++k) {
    for (std::size_t m = 0; m < M; ++m) {
      const MonitoredGate& g = sched.gates[m];
      rho = monitored_gate(rho, g, angles[static_cast<std::size_t>(k) * M + m], beta, d);
      detail::apply_gate_noise(rho, g, noise);
    }
  }
  return rho;
}

/// Kraus product A = K_{dM} ... K_1 of one noiseless angle set, so that the
/// unnormalized accepted state is A A^dagger / 2^n.
inline ComplexMatrix accepted_kraus(const GateSchedule& sched, int qubits, double beta, int d,
                                    const std::vector<double>& angles) {
  const auto M = static_cast<std::size_t>(sched.size());
  if (angles.size() != M * static_cast<std::size_t>(d)) throw DimensionError("angle set size mismatch");
  ComplexMatrix a = identity(dim_of(qubits));
  for (int k = 0; k < d; ++k) {
    for (std::size_t m = 0; m < M; ++m) {
      const MonitoredGate& g = sched.gates[m];
      const double theta = angles[static_cast<std::size_t>(k) * M + m];
      if (const auto* t = std::get_if<PositiveTerm>(&g.generator)) {
        const double c = std::cos(theta * detail::gate_speed(beta, d, t->scale));
        const detail::PauliAction act{t->pauli.x_mask(), &t->pauli};
        a = 0.5 * (1.0 + c) * a - 0.5 * t->sign * (1.0 - c) * act.left(a);
      } else {
        const Spectrum s = herm_eig(std::get<ComplexMatrix>(g.generator));
        a = spectral_function(s, [&](double e) {
              return cplx(std::cos(theta * detail::gate_speed(beta, d, std::max(0.0, e))), 0.0);
            }) * a;
      }
    }
  }
  return a;
}

/// S(sigma || A A^dagger / Tr(A A^dagger)) from the singular values of A.
/// Small eigenvalues of the target keep full relative precision this way.
inline double relative_entropy_to_factored(const DensityMatrix& sigma, const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU);
  const RealVector sv = svd.singularValues();
  const double norm = sv.squaredNorm();
  if (!(norm > 0.0)) return std::numeric_limits<double>::infinity();
  const ComplexMatrix& u = svd.matrixU();
  const ComplexMatrix w = u.adjoint() * sigma.matrix() * u;
  double s = -von_neumann_entropy(sigma);
  for (Index j = 0; j < sv.size(); ++j) {
    const double weight = w(j, j).real();
    if (sv(j) == 0.0) {
      if (weight > 1e-14) return std::numeric_limits<double>::infinity();
      continue;
    }
    s -= weight * (2.0 * std::log(sv(j)) - std::log(norm));
  }
  return std::max(0.0, s);
}

/// Exact angle average of the unnormalized accepted state (the infinite-sample
/// limit of the P-weighted mode).
inline ComplexMatrix expected_unnormalized(const GateSchedule& sched, int qubits, double beta, int d,
                                           const GateNoise& noise = {}) {
  const Index dim = dim_of(qubits);
  ComplexMatrix rho = identity(dim) / static_cast<double>(dim);
  for (int k = 0; k < d; ++k) {
    for (const auto& g : sched.gates) {
      rho = averaged_monitored_gate(rho, g, beta, d);
      detail::apply_gate_noise(rho, g, noise);
    }
  }
  return rho;
}

inline DensityMatrix exact_mode1_state(const UniversalConfig& cfg) {
  cfg.validate();
  const GateSchedule sched = build_schedule(cfg.hamiltonian, cfg.undivided);
  const ComplexMatrix r = expected_unnormalized(sched, cfg.hamiltonian.qubits(), cfg.beta,
                                                cfg.cycles, cfg.noise);
  return DensityMatrix::unchecked(r / r.trace().real());
}

/// Angle set of one realization, drawn from its own stream.
inline std::vector<double> draw_angles(std::uint64_t seed, std::uint64_t sample, std::size_t count) {
  Stream rng(seed, sample);
  std::vector<double> a(count);
  for (auto& x : a) x = rng.normal();
  return a;
}

/// 2^-n Z_beta of the shifted Hamiltonian that the circuit actually runs.
inline double success_probability_estimate(const PauliSumHamiltonian& h, double beta) {
  detail::check_beta(beta);
  const Spectrum s = herm_eig(h.dense());
  const double shift = positive_decomposition(h).shift;
  double z = 0.0;
  for (Index i = 0; i < s.size(); ++i) z += std::exp(-beta * (s.values(i) + shift));
  return z / static_cast<double>(s.size());
}

/// C = M^-1 sum_m Var_beta(h_m) over the positive terms.
inline double tail_constant(const PauliSumHamiltonian& h, double beta) {
  const GibbsState g = exact_gibbs(h, beta);
  const PositiveDecomposition d = positive_decomposition(h);
  if (d.terms.empty()) return 0.0;
  double total = 0.0;
  for (const auto& t : d.terms) {
    const ComplexMatrix hm = t.dense();
    const double m1 = g.rho.expectation(hm);
    const double m2 = g.rho.expectation(hm * hm);
    total += m2 - m1 * m1;
  }
  return total / static_cast<double>(d.terms.size());
}

struct UniversalResult {
  Mode mode = Mode::kRerandomizeAlways;
  DensityMatrix accepted_mean_state;  // P-weighted average
  DensityMatrix conditional_mean_state;  // unweighted average of accepted states
  DensityMatrix fixed_state;          // realization 0 alone
  DensityMatrix mode_state;           // the one selected by the configured mode
  double success_probability = 0.0;
  double success_probability_stderr = 0.0;
  Spectrum spectrum;
  RealVector eigen_probs;  // populations of mode_state
  RealVector eigen_probs_stderr;
  RealVector exact_probs;
  double energy = 0.0;
  double exact_energy = 0.0;
  double relative_entropy_to_gibbs = 0.0;     // S(rho_beta || mode_state)
  double mode1_relative_entropy = 0.0;        // S(rho_beta || accepted_mean_state)
  double mean_realization_entropy = 0.0;      // mean of S(rho_beta || rho_out(theta))
  std::vector<double> realization_entropies;  // per accepted realization
  int gates_per_cycle = 0;
  double shift = 0.0;
  double xi = 0.0;
  std::string warning;
  int degenerate_realizations = 0;
  std::vector<RunRecord> records;
};

inline UniversalResult run_universal(const UniversalConfig& cfg) {
  cfg.validate();
  const int n = cfg.hamiltonian.qubits();
  const Index dim = dim_of(n);
  const GateSchedule sched = build_schedule(cfg.hamiltonian, cfg.undivided);
  const GibbsState gibbs = exact_gibbs(cfg.hamiltonian, cfg.beta);
  const Spectrum& spec = gibbs.spectrum;
  const std::size_t n_angles = static_cast<std::size_t>(sched.size()) * static_cast<std::size_t>(cfg.cycles);
  constexpr double kDegenerate = 1e-300;

  struct Partial {
    ComplexMatrix weighted = ComplexMatrix();  // sum of unnormalized states
    ComplexMatrix conditional = ComplexMatrix();
    RealVector pop_w, pop_w2, pop_wp, pop_c, pop_c2;  // pop_wp = sum P^2 x
    double p_sum = 0.0, p_sq = 0.0;
    int accepted = 0, degenerate = 0;
    std::vector<double> entropies;
    std::vector<RunRecord> records;
  };

  // Mode 3 uses only realization 0; modes 1 and 2 average over all samples.
  const std::size_t samples =
      cfg.mode == Mode::kFixedAngles ? 1 : static_cast<std::size_t>(cfg.samples);

  auto work = [&](std::size_t begin, std::size_t end) {
    Partial p;
    p.weighted = ComplexMatrix::Zero(dim, dim);
    p.conditional = ComplexMatrix::Zero(dim, dim);
    p.pop_w = p.pop_w2 = p.pop_wp = p.pop_c = p.pop_c2 = RealVector::Zero(dim);
    for (std::size_t s = begin; s < end; ++s) {
      const auto angles = draw_angles(cfg.seed, s, n_angles);
      ComplexMatrix kraus;
      ComplexMatrix r;
      if (cfg.noise.enabled()) {
        r = accepted_unnormalized(sched, n, cfg.beta, cfg.cycles, angles, cfg.noise);
      } else {
        kraus = accepted_kraus(sched, n, cfg.beta, cfg.cycles, angles);
        r = kraus * kraus.adjoint() / static_cast<double>(dim);
      }
      const double prob = r.trace().real();
      RunRecord rec;
      rec.sample_index = s;
      rec.seed = cfg.seed;
      rec.acceptance_probability = prob;
      p.p_sum += prob;
      p.p_sq += prob * prob;
      p.weighted += r;
      if (!(prob >= kDegenerate)) {
        ++p.degenerate;
        rec.accepted = false;
      } else {
        const DensityMatrix out = DensityMatrix::unchecked(r / prob);
        const RealVector pops = populations(out, spec.vectors);
        p.conditional += out.matrix();
        p.pop_w += prob * pops;
        p.pop_w2 += prob * prob * pops.cwiseProduct(pops);
        p.pop_wp += prob * prob * pops;
        p.pop_c += pops;
        p.pop_c2 += pops.cwiseProduct(pops);
        rec.relative_entropy = kraus.size() ? relative_entropy_to_factored(gibbs.rho, kraus)
                                            : relative_entropy(gibbs.rho, out);
        p.entropies.push_back(rec.relative_entropy);
        ++p.accepted;
        rec.eigen_probs = pops;
      }
      if (cfg.keep_records) {
        rec.parameters = angles;
        p.records.push_back(std::move(rec));
      }
    }
    return p;
  };
  auto combine = [](Partial acc, Partial part) {
    if (acc.weighted.size() == 0) return part;
    acc.weighted += part.weighted;
    acc.conditional += part.conditional;
    acc.pop_w += part.pop_w;
    acc.pop_w2 += part.pop_w2;
    acc.pop_wp += part.pop_wp;
    acc.pop_c += part.pop_c;
    acc.pop_c2 += part.pop_c2;
    acc.p_sum += part.p_sum;
    acc.p_sq += part.p_sq;
    acc.accepted += part.accepted;
    acc.degenerate += part.degenerate;
    acc.entropies.insert(acc.entropies.end(), part.entropies.begin(), part.entropies.end());
    for (auto& r : part.records) acc.records.push_back(std::move(r));
    return acc;
  };
  Partial t = ordered_block_reduce(samples, 16, cfg.threads, work, combine, Partial{});
  if (t.accepted == 0) throw DegenerateError("every realization has zero acceptance probability");

  UniversalResult res;
  res.mode = cfg.mode;
  res.spectrum = spec;
  res.exact_probs = gibbs.eigen_probs;
  res.exact_energy = gibbs.eigen_probs.dot(spec.values);
  res.gates_per_cycle = sched.size();
  res.shift = sched.shift;
  res.xi = cfg.beta * cfg.beta * sched.size() / static_cast<double>(cfg.cycles);
  if (res.xi >= 1.0) {
    res.warning = "xi = beta^2 M / d = " + std::to_string(res.xi) + " is not small; expect a biased state";
  }
  res.degenerate_realizations = t.degenerate;

  const double N = static_cast<double>(samples);
  const double A = static_cast<double>(t.accepted);
  res.success_probability = t.p_sum / N;
  res.success_probability_stderr =
      samples > 1 ? std::sqrt(std::max(0.0, t.p_sq / N - res.success_probability * res.success_probability) / (N - 1.0))
                  : 0.0;
  res.accepted_mean_state = DensityMatrix::unchecked(t.weighted / t.weighted.trace().real());
  res.conditional_mean_state = DensityMatrix::unchecked(t.conditional / A);
  {
    const auto angles = draw_angles(cfg.seed, 0, n_angles);
    const ComplexMatrix r = accepted_unnormalized(sched, n, cfg.beta, cfg.cycles, angles, cfg.noise);
    const double prob = r.trace().real();
    res.fixed_state = prob >= kDegenerate ? DensityMatrix::unchecked(r / prob) : res.accepted_mean_state;
  }

  RealVector se = RealVector::Zero(dim);
  switch (cfg.mode) {
    case Mode::kRerandomizeAlways: {
      res.mode_state = res.accepted_mean_state;
      // Ratio estimator sum(P x) / sum(P): delta-method standard error.
      if (samples > 1) {
        const RealVector mean = t.pop_w / t.p_sum;
        const double pbar = t.p_sum / N;
        const RealVector var = (t.pop_w2 / N - 2.0 * mean.cwiseProduct(t.pop_wp) / N +
                                mean.cwiseProduct(mean) * (t.p_sq / N)) /
                               (pbar * pbar);
        se = (var.cwiseMax(0.0) / (N - 1.0)).cwiseSqrt();
      }
      break;
    }
    case Mode::kRerandomizeOnAccept: {
      res.mode_state = res.conditional_mean_state;
      if (t.accepted > 1) {
        const RealVector mean = t.pop_c / A;
        se = ((t.pop_c2 / A - mean.cwiseProduct(mean)).cwiseMax(0.0) / (A - 1.0)).cwiseSqrt();
      }
      break;
    }
    case Mode::kFixedAngles:
      res.mode_state = res.fixed_state;
      break;
  }
  res.eigen_probs = populations(res.mode_state, spec.vectors);
  res.eigen_probs_stderr = se;
  res.energy = res.eigen_probs.dot(spec.values);
  res.relative_entropy_to_gibbs = relative_entropy(gibbs.rho, res.mode_state);
  res.mode1_relative_entropy = relative_entropy(gibbs.rho, res.accepted_mean_state);
  res.realization_entropies = std::move(t.entropies);
  double sum = 0.0;
  for (double x : res.realization_entropies) sum += x;
  res.mean_realization_entropy = sum / A;
  res.records = std::move(t.records);
  return res;
}

/// Fraction of realizations with entropy at least xi C / eps.
inline double tail_fraction(const std::vector<double>& entropies, double xi, double C, double eps) {
  if (entropies.empty()) return 0.0;
  const double cut = xi * C / eps;
  std::size_t hits = 0;
  for (double s : entropies) hits += s >= cut;
  return static_cast<double>(hits) / static_cast<double>(entropies.size());
}

}  // namespace gibbsq
