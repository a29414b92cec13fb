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

#include <string>

#include "gibbsq/density_matrix.hpp"

namespace gibbsq {

namespace detail {

/// (1-3p) rho + p (X rho X + Y rho Y + Z rho Z) on `qubit`, in place.
/// With s = +-1 for bit value 0/1: X rho X + Y rho Y = (1 + s_i s_j) rho[i^b, j^b]
/// and Z rho Z = s_i s_j rho[i, j].
inline void depolarize_inplace(ComplexMatrix& m, int qubit, double p) {
  if (p == 0.0) return;
  const Index b = Index{1} << qubit;
  const Index dim = m.rows();
  for (Index j = 0; j < dim; ++j) {
    if (j & b) continue;
    const Index jf = j | b;
    for (Index i = 0; i < dim; ++i) {
      if (i & b) continue;
      const Index iff = i | b;
      // The 2x2 block {i, i|b} x {j, j|b} mixes only within itself.
      const cplx a00 = m(i, j), a01 = m(i, jf), a10 = m(iff, j), a11 = m(iff, jf);
      m(i, j) = (1.0 - 2.0 * p) * a00 + 2.0 * p * a11;
      m(iff, jf) = (1.0 - 2.0 * p) * a11 + 2.0 * p * a00;
      m(i, jf) = (1.0 - 4.0 * p) * a01;
      m(iff, j) = (1.0 - 4.0 * p) * a10;
    }
  }
}

inline void check_depolarizing_p(double p) {
  if (!(p >= 0.0 && p <= 0.25)) {
    throw DomainError("depolarizing probability " + std::to_string(p) + " outside [0, 1/4]");
  }
}

}  // namespace detail

inline DensityMatrix depolarize(const DensityMatrix& rho, int qubit, double p) {
  detail::check_depolarizing_p(p);
  if (qubit < 0 || qubit >= rho.qubits()) throw DimensionError("depolarizing qubit out of range");
  ComplexMatrix m = rho.matrix();
  detail::depolarize_inplace(m, qubit, p);
  return DensityMatrix::unchecked(m);
}

inline DensityMatrix depolarize_all(const DensityMatrix& rho, double p) {
  detail::check_depolarizing_p(p);
  ComplexMatrix m = rho.matrix();
  for (int q = 0; q < rho.qubits(); ++q) detail::depolarize_inplace(m, q, p);
  return DensityMatrix::unchecked(m);
}

}  // namespace gibbsq
