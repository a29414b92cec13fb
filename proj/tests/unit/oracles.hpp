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

// Independent reference computations for the unit tests. Nothing here calls
// into the library beyond its type aliases.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat pauli(char c) {
  Mat m(2, 2);
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

/// Textbook Kronecker product, a on the high index bits.
inline Mat kron2(const Mat& a, const Mat& b) {
  Mat out = Mat::Zero(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// ops[q] acts on qubit q; qubit 0 is the least significant bit.
inline Mat tensor(const std::vector<Mat>& ops) {
  Mat out = Mat::Identity(1, 1);
  for (const auto& op : ops) out = kron2(op, out);
  return out;
}

/// Pauli string by tensor product, letter k on qubit k.
inline Mat pauli_string(const std::string& letters) {
  std::vector<Mat> ops;
  for (char c : letters) ops.push_back(pauli(c));
  return tensor(ops);
}

/// exp(A) by scaling and squaring around a truncated Taylor series.
inline Mat expm(const Mat& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (norm / std::ldexp(1.0, s) > 0.25) ++s;
  const Mat b = a / std::ldexp(1.0, s);
  Mat term = Mat::Identity(a.rows(), a.cols());
  Mat sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

inline Mat random_hermitian(std::mt19937_64& g, int dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = cplx(n(g), n(g));
  return 0.5 * (m + m.adjoint());
}

/// Random full-rank density matrix G G^dagger / Tr.
inline Mat random_density(std::mt19937_64& g, int dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = cplx(n(g), n(g));
  Mat r = m * m.adjoint();
  return r / r.trace().real();
}

/// Eigenvalues via the general (non-Hermitian) Schur solver, sorted ascending.
inline std::vector<double> eigenvalues_general(const Mat& m) {
  Eigen::ComplexEigenSolver<Mat> es(m);
  std::vector<double> v;
  for (int i = 0; i < m.rows(); ++i) v.push_back(es.eigenvalues()(i).real());
  std::sort(v.begin(), v.end());
  return v;
}

/// log of a positive definite matrix through the general eigensolver.
inline Mat logm_pd(const Mat& m) {
  Eigen::ComplexEigenSolver<Mat> es(m);
  Mat d = Mat::Zero(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) d(i, i) = std::log(es.eigenvalues()(i));
  return es.eigenvectors() * d * es.eigenvectors().inverse();
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
