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

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "gibbsq/density_matrix.hpp"
#include "gibbsq/hamiltonian.hpp"

namespace gibbsq {

struct GibbsState {
  double beta = 0.0;
  DensityMatrix rho;
  double log_partition = 0.0;  // log Z_beta
  RealVector eigen_probs;      // aligned with spectrum.values (ascending energy)
  Spectrum spectrum;

  double partition_function() const { return std::exp(log_partition); }
};

namespace detail {

inline void check_beta(double beta) {
  if (!std::isfinite(beta) || beta < 0.0) {
    throw DomainError("inverse temperature must be finite and non-negative, got " +
                      std::to_string(beta));
  }
}

/// Normalize exp(logw) with a max shift. Returns log of the normalizer.
inline double normalize_log_weights(const RealVector& logw, RealVector& p) {
  const double top = logw.maxCoeff();
  p = (logw.array() - top).exp().matrix();
  const double s = p.sum();
  p /= s;
  return top + std::log(s);
}

inline DensityMatrix state_from_probs(const Spectrum& s, const RealVector& p) {
  return DensityMatrix::unchecked(s.vectors * p.cast<cplx>().asDiagonal() * s.vectors.adjoint());
}

/// log cosh(x) without overflow.
inline double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

}  // namespace detail

/// n(x) = 1 / (1 + e^x).
inline double fermi(double x) {
  if (x > 0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

inline GibbsState exact_gibbs(const Spectrum& s, double beta) {
  detail::check_beta(beta);
  GibbsState g;
  g.beta = beta;
  g.spectrum = s;
  const RealVector logw = -beta * s.values;
  g.log_partition = detail::normalize_log_weights(logw, g.eigen_probs);
  g.rho = detail::state_from_probs(s, g.eigen_probs);
  return g;
}

inline GibbsState exact_gibbs(const PauliSumHamiltonian& h, double beta) {
  detail::check_beta(beta);
  return exact_gibbs(herm_eig(h.dense()), beta);
}

inline double thermal_energy(const Spectrum& s, double beta) {
  const GibbsState g = exact_gibbs(s, beta);
  return g.eigen_probs.dot(s.values);
}

inline double thermal_energy(const PauliSumHamiltonian& h, double beta) {
  detail::check_beta(beta);
  return thermal_energy(herm_eig(h.dense()), beta);
}

/// Eigenvalue weights of exp(-beta H) cosh^d(beta H / d), normalized.
inline RealVector binomial_weights(const Spectrum& s, double beta, int d) {
  detail::check_beta(beta);
  if (d < 1) throw DomainError("cycle count d must be at least 1");
  RealVector logw(s.size());
  for (Index i = 0; i < s.size(); ++i) {
    const double e = s.values(i);
    logw(i) = -beta * e + d * detail::log_cosh(beta * e / d);
  }
  RealVector p;
  detail::normalize_log_weights(logw, p);
  return p;
}

inline DensityMatrix binomial_quasi_gibbs(const Spectrum& s, double beta, int d) {
  return detail::state_from_probs(s, binomial_weights(s, beta, d));
}

inline DensityMatrix binomial_quasi_gibbs(const PauliSumHamiltonian& h, double beta, int d) {
  detail::check_beta(beta);
  if (d < 1) throw DomainError("cycle count d must be at least 1");
  return binomial_quasi_gibbs(herm_eig(h.dense()), beta, d);
}

inline void write_eigen_csv(std::ostream& os, const GibbsState& g) {
  os << "# schema=1\n";
  os << "mu,E_mu,p_mu\n";
  char buf[128];
  for (Index mu = 0; mu < g.spectrum.size(); ++mu) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g\n", static_cast<long>(mu),
                  g.spectrum.values(mu), g.eigen_probs(mu));
    os << buf;
  }
}

}  // namespace gibbsq
