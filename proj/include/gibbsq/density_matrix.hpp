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
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gibbsq/linalg.hpp"

namespace gibbsq {

/// Hermitian, positive semidefinite, unit-trace operator on a qubit register.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kNegativityTol = 1e-10;

  DensityMatrix() = default;

  /// Validates every invariant. Small anti-Hermitian noise is symmetrized away.
  static DensityMatrix from_matrix(const ComplexMatrix& m) {
    const int q = qubits_of(m.rows());
    if (m.rows() != m.cols() || q < 0) {
      throw DimensionError("density matrix must be square with dimension 2^q");
    }
    dim_of(q);
    if (!is_hermitian(m, kHermitianTol)) throw DomainError("density matrix is not Hermitian");
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) {
      throw DomainError("density matrix trace " + std::to_string(tr) + " differs from 1");
    }
    DensityMatrix rho(0.5 * (m + m.adjoint()), q);
    const double lowest = herm_eig(rho.m_).values(0);
    if (lowest < -kNegativityTol) {
      throw DomainError("density matrix has eigenvalue " + std::to_string(lowest));
    }
    return rho;
  }

  /// Trusted constructor for outputs of channels that preserve the invariants
  /// by construction. Hermitian part is taken; no spectral check.
  static DensityMatrix unchecked(const ComplexMatrix& m) {
    const int q = qubits_of(m.rows());
    if (m.rows() != m.cols() || q < 0) {
      throw DimensionError("density matrix must be square with dimension 2^q");
    }
    return DensityMatrix(0.5 * (m + m.adjoint()), q);
  }

  static DensityMatrix maximally_mixed(int qubits) {
    const Index dim = dim_of(qubits);
    return DensityMatrix(identity(dim) / static_cast<double>(dim), qubits);
  }

  static DensityMatrix basis_state(int qubits, std::uint64_t index) {
    const Index dim = dim_of(qubits);
    if (index >= static_cast<std::uint64_t>(dim)) throw DimensionError("basis index out of range");
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    m(static_cast<Index>(index), static_cast<Index>(index)) = 1.0;
    return DensityMatrix(std::move(m), qubits);
  }

  static DensityMatrix pure(const ComplexVector& psi) {
    const double n = psi.norm();
    if (n == 0.0) throw DomainError("zero state vector");
    const ComplexVector v = psi / n;
    return unchecked(v * v.adjoint());
  }

  const ComplexMatrix& matrix() const { return m_; }
  int qubits() const { return qubits_; }
  Index dim() const { return m_.rows(); }

  /// Eigenvalues ascending, with tiny negative values clamped to zero.
  RealVector eigenvalues() const {
    RealVector ev = herm_eig(m_).values;
    for (Index i = 0; i < ev.size(); ++i) {
      if (ev(i) < -kNegativityTol) {
        throw DomainError("state has eigenvalue " + std::to_string(ev(i)) +
                          " below the negativity tolerance");
      }
      ev(i) = std::max(ev(i), 0.0);
    }
    return ev;
  }

  double expectation(const ComplexMatrix& op) const {
    if (op.rows() != dim() || op.cols() != dim()) throw DimensionError("observable size mismatch");
    return (m_ * op).trace().real();
  }

 private:
  DensityMatrix(ComplexMatrix m, int q) : m_(std::move(m)), qubits_(q) {}

  ComplexMatrix m_;
  int qubits_ = 0;
};

/// Trace out every qubit not in `keep`. Qubit keep[k] of the input becomes
/// qubit k of the output.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  if (keep.empty()) throw DimensionError("partial trace needs at least one kept qubit");
  const int total = rho.qubits();
  detail::check_targets(keep, total);
  const auto traced = detail::complement(keep, total);
  const Index kd = Index{1} << keep.size();
  const Index td = Index{1} << traced.size();
  std::vector<std::uint64_t> kept_offset(static_cast<std::size_t>(kd));
  std::vector<std::uint64_t> traced_offset(static_cast<std::size_t>(td));
  for (Index a = 0; a < kd; ++a) {
    kept_offset[static_cast<std::size_t>(a)] = detail::spread_bits(static_cast<std::uint64_t>(a), keep);
  }
  for (Index r = 0; r < td; ++r) {
    traced_offset[static_cast<std::size_t>(r)] =
        detail::spread_bits(static_cast<std::uint64_t>(r), traced);
  }
  const ComplexMatrix& m = rho.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(kd, kd);
  for (Index a = 0; a < kd; ++a) {
    for (Index b = 0; b < kd; ++b) {
      cplx acc = 0.0;
      for (Index r = 0; r < td; ++r) {
        const auto t = traced_offset[static_cast<std::size_t>(r)];
        acc += m(static_cast<Index>(kept_offset[static_cast<std::size_t>(a)] | t),
                 static_cast<Index>(kept_offset[static_cast<std::size_t>(b)] | t));
      }
      out(a, b) = acc;
    }
  }
  return DensityMatrix::unchecked(out);
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep) {
  return partial_trace(rho, std::span<const int>(keep.begin(), keep.size()));
}

/// Keep the `low` least significant qubits. The input is a matrix on
/// low + high qubits laid out as kron(high, low).
inline ComplexMatrix trace_out_high(const ComplexMatrix& m, int low) {
  const Index ld = Index{1} << low;
  const Index hd = m.rows() / ld;
  ComplexMatrix out = ComplexMatrix::Zero(ld, ld);
  for (Index h = 0; h < hd; ++h) out += m.block(h * ld, h * ld, ld, ld);
  return out;
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("trace distance between states of different size");
  const RealVector ev = herm_eig(a.matrix() - b.matrix()).values;
  return std::min(1.0, 0.5 * ev.cwiseAbs().sum());
}

namespace detail {

inline double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

}  // namespace detail

inline double von_neumann_entropy(const DensityMatrix& rho) {
  const RealVector ev = rho.eigenvalues();
  double s = 0.0;
  for (Index i = 0; i < ev.size(); ++i) s -= detail::xlogx(ev(i));
  return std::max(0.0, s);
}

/// S(a||b) = Tr a (log a - log b), natural log. Returns +inf when the support
/// of a is not contained in the support of b.
inline double relative_entropy(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("relative entropy between states of different size");
  constexpr double kSupport = 1e-14;
  const Spectrum sa = herm_eig(a.matrix());
  const Spectrum sb = herm_eig(b.matrix());
  double s = 0.0;
  for (Index i = 0; i < sa.size(); ++i) {
    if (sa.values(i) < -DensityMatrix::kNegativityTol) throw DomainError("first argument is not PSD");
    s += detail::xlogx(std::max(0.0, sa.values(i)));
  }
  // Tr(a log b) = sum_j <b_j|a|b_j> log b_j.
  const ComplexMatrix overlap = sb.vectors.adjoint() * a.matrix() * sb.vectors;
  for (Index j = 0; j < sb.size(); ++j) {
    const double w = overlap(j, j).real();
    if (sb.values(j) < -DensityMatrix::kNegativityTol) throw DomainError("second argument is not PSD");
    if (sb.values(j) <= kSupport) {
      if (w > kSupport) return std::numeric_limits<double>::infinity();
      continue;
    }
    s -= w * std::log(sb.values(j));
  }
  return std::max(0.0, s);
}

/// Populations of `rho` in the eigenbasis `basis` (columns).
inline RealVector populations(const DensityMatrix& rho, const ComplexMatrix& basis) {
  const ComplexMatrix proj = basis.adjoint() * rho.matrix() * basis;
  RealVector p(proj.rows());
  for (Index i = 0; i < proj.rows(); ++i) p(i) = proj(i, i).real();
  return p;
}

}  // namespace gibbsq
