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

// Dense complex linear algebra on qubit registers.
//
// Basis convention, used everywhere in the library: qubit 0 is the least
// significant bit of the computational-basis index. For an operator acting on
// an ordered list of target qubits, bit k of the operator's local index maps
// to targets[k].

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gibbsq/errors.hpp"

namespace gibbsq {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Dense storage is capped at 12 qubits (dimension 4096).
inline constexpr int kMaxQubits = 12;

inline Index dim_of(int qubits) {
  if (qubits < 0 || qubits > kMaxQubits) {
    throw DimensionError("register of " + std::to_string(qubits) +
                         " qubits is outside the supported range 0.." +
                         std::to_string(kMaxQubits));
  }
  return Index{1} << qubits;
}

/// Number of qubits q with 2^q == dim, or -1.
inline int qubits_of(Index dim) {
  if (dim < 1 || (dim & (dim - 1)) != 0) return -1;
  int q = 0;
  while ((Index{1} << q) < dim) ++q;
  return q;
}

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, max_abs(m));
  return max_abs(m - m.adjoint()) <= tol * scale;
}

namespace detail {

inline void check_targets(std::span<const int> targets, int total_qubits) {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= total_qubits) {
      throw DimensionError("qubit index " + std::to_string(targets[i]) +
                           " out of range for " + std::to_string(total_qubits) +
                           "-qubit register");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[j] == targets[i]) {
        throw DimensionError("duplicate qubit index " + std::to_string(targets[i]));
      }
    }
  }
}

/// Scatter the low bits of `local` onto the positions listed in `qubits`.
inline std::uint64_t spread_bits(std::uint64_t local, std::span<const int> qubits) {
  std::uint64_t out = 0;
  for (std::size_t k = 0; k < qubits.size(); ++k) {
    out |= ((local >> k) & 1ULL) << qubits[k];
  }
  return out;
}

inline std::vector<int> complement(std::span<const int> qubits, int total_qubits) {
  std::vector<int> rest;
  for (int q = 0; q < total_qubits; ++q) {
    if (std::find(qubits.begin(), qubits.end(), q) == qubits.end()) rest.push_back(q);
  }
  return rest;
}

}  // namespace detail

/// Embed `op` acting on `targets` into a `total_qubits` register,
/// identity on every other qubit.
inline ComplexMatrix kron_embed(const ComplexMatrix& op, std::span<const int> targets,
                                int total_qubits) {
  const Index dim = dim_of(total_qubits);
  detail::check_targets(targets, total_qubits);
  const Index local_dim = Index{1} << targets.size();
  if (op.rows() != local_dim || op.cols() != local_dim) {
    throw DimensionError("operator of size " + std::to_string(op.rows()) + "x" +
                         std::to_string(op.cols()) + " cannot act on " +
                         std::to_string(targets.size()) + " qubits");
  }
  const auto rest = detail::complement(targets, total_qubits);
  std::vector<std::uint64_t> local_offsets(static_cast<std::size_t>(local_dim));
  for (Index a = 0; a < local_dim; ++a) {
    local_offsets[static_cast<std::size_t>(a)] =
        detail::spread_bits(static_cast<std::uint64_t>(a), targets);
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  const Index rest_dim = Index{1} << rest.size();
  for (Index r = 0; r < rest_dim; ++r) {
    const auto base = detail::spread_bits(static_cast<std::uint64_t>(r), rest);
    for (Index a = 0; a < local_dim; ++a) {
      const auto row = static_cast<Index>(base | local_offsets[static_cast<std::size_t>(a)]);
      for (Index b = 0; b < local_dim; ++b) {
        out(row, static_cast<Index>(base | local_offsets[static_cast<std::size_t>(b)])) = op(a, b);
      }
    }
  }
  return out;
}

inline ComplexMatrix kron_embed(const ComplexMatrix& op, std::initializer_list<int> targets,
                                int total_qubits) {
  return kron_embed(op, std::span<const int>(targets.begin(), targets.size()), total_qubits);
}

/// Kronecker product a (x) b; b occupies the low-order index bits.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Eigenvalues ascending with orthonormal eigenvectors as columns.
struct Spectrum {
  RealVector values;
  ComplexMatrix vectors;

  Index size() const { return values.size(); }
  ComplexVector vector(Index mu) const { return vectors.col(mu); }
};

namespace detail {

/// Fix the global phase of each eigenvector (dominant component real and
/// positive) and order degenerate groups by the position of that component,
/// so repeated runs report identical tables.
inline void canonicalize(Spectrum& s) {
  const Index n = s.size();
  std::vector<Index> lead(static_cast<std::size_t>(n));
  for (Index mu = 0; mu < n; ++mu) {
    auto v = s.vectors.col(mu);
    const double peak = v.cwiseAbs().maxCoeff();
    Index k = 0;
    while (std::abs(v(k)) < peak - 1e-9) ++k;
    v *= std::conj(v(k)) / std::abs(v(k));
    lead[static_cast<std::size_t>(mu)] = k;
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const double scale = n == 0 ? 1.0 : std::max(1.0, s.values.cwiseAbs().maxCoeff());
  Index start = 0;
  while (start < n) {
    Index stop = start + 1;
    while (stop < n && s.values(stop) - s.values(stop - 1) <= 1e-9 * scale) ++stop;
    std::stable_sort(order.begin() + start, order.begin() + stop, [&](Index a, Index b) {
      return lead[static_cast<std::size_t>(a)] < lead[static_cast<std::size_t>(b)];
    });
    start = stop;
  }
  Spectrum sorted{RealVector(n), ComplexMatrix(n, n)};
  for (Index i = 0; i < n; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    sorted.values(i) = s.values(src);
    sorted.vectors.col(i) = s.vectors.col(src);
  }
  s = std::move(sorted);
}

}  // namespace detail

inline Spectrum herm_eig(const ComplexMatrix& op) {
  if (op.rows() != op.cols() || op.rows() == 0) {
    throw DimensionError("eigendecomposition needs a non-empty square matrix");
  }
  if (!is_hermitian(op, 1e-10)) {
    throw DomainError("eigendecomposition input is not Hermitian");
  }
  Spectrum s;
  if (op.imag().cwiseAbs().maxCoeff() == 0.0) {
    // Real symmetric input: the real solver is several times faster.
    const RealMatrix re = 0.5 * (op.real() + op.real().transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(re);
    s.values = solver.eigenvalues();
    s.vectors = solver.eigenvectors().cast<cplx>();
  } else {
    const ComplexMatrix sym = 0.5 * (op + op.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    s.values = solver.eigenvalues();
    s.vectors = solver.eigenvectors();
  }
  detail::canonicalize(s);
  return s;
}

/// f(A) = V f(Λ) V† for Hermitian A given its spectrum.
template <class F>
ComplexMatrix spectral_function(const Spectrum& s, F&& f) {
  ComplexVector fv(s.size());
  for (Index i = 0; i < s.size(); ++i) fv(i) = f(s.values(i));
  return s.vectors * fv.asDiagonal() * s.vectors.adjoint();
}

/// exp(-i h t), computed from the eigendecomposition of h.
inline ComplexMatrix unitary_of(const ComplexMatrix& h, double t) {
  const Spectrum s = herm_eig(h);
  return spectral_function(s, [t](double e) { return std::exp(cplx(0.0, -e * t)); });
}

inline ComplexMatrix identity(Index dim) { return ComplexMatrix::Identity(dim, dim); }

inline double unitarity_defect(const ComplexMatrix& u) {
  return max_abs(u * u.adjoint() - identity(u.rows()));
}

}  // namespace gibbsq
