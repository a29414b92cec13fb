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

#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gibbsq/pauli.hpp"

namespace gibbsq {

struct PauliTerm {
  double coefficient = 0.0;
  PauliString string;
};

/// H = sum_k c_k P_k. Terms with the same string are merged in first-seen
/// order and exact zeros are dropped.
class PauliSumHamiltonian {
 public:
  explicit PauliSumHamiltonian(int qubits = 0) : qubits_(qubits) {
    if (qubits < 0 || qubits > kMaxQubits) {
      throw DimensionError("Hamiltonian on " + std::to_string(qubits) + " qubits is unsupported");
    }
  }

  PauliSumHamiltonian& add(double coefficient, const PauliString& p) {
    if (!std::isfinite(coefficient)) throw DomainError("non-finite Hamiltonian coefficient");
    if (p.qubits() != qubits_) {
      throw DimensionError("term \"" + p.letters() + "\" does not match a " +
                           std::to_string(qubits_) + "-qubit Hamiltonian");
    }
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
      if (it->string == p) {
        it->coefficient += coefficient;
        if (it->coefficient == 0.0) terms_.erase(it);
        return *this;
      }
    }
    if (coefficient != 0.0) terms_.push_back({coefficient, p});
    return *this;
  }

  PauliSumHamiltonian& add(double coefficient, std::string_view letters) {
    return add(coefficient, PauliString(letters));
  }

  int qubits() const { return qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }

  /// Coefficient of the identity string, zero if absent.
  double identity_coefficient() const {
    for (const auto& t : terms_) {
      if (t.string.is_identity()) return t.coefficient;
    }
    return 0.0;
  }

  ComplexMatrix dense() const {
    const Index dim = dim_of(qubits_);
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    for (const auto& t : terms_) {
      const std::uint64_t xm = t.string.x_mask();
      for (Index j = 0; j < dim; ++j) {
        const auto col = static_cast<std::uint64_t>(j);
        m(static_cast<Index>(col ^ xm), j) += t.coefficient * t.string.phase(col);
      }
    }
    return m;
  }

  /// Sum of |c_k| over non-identity terms.
  double one_norm() const {
    double s = 0.0;
    for (const auto& t : terms_) {
      if (!t.string.is_identity()) s += std::abs(t.coefficient);
    }
    return s;
  }

  /// Copy with every coefficient scaled by `s`.
  PauliSumHamiltonian scaled(double s) const {
    PauliSumHamiltonian h(qubits_);
    for (const auto& t : terms_) h.add(s * t.coefficient, t.string);
    return h;
  }

 private:
  int qubits_;
  std::vector<PauliTerm> terms_;
};

/// h = scale * (I + sign * P) / 2, a positive multiple of a projector.
struct PositiveTerm {
  double scale = 0.0;
  int sign = 1;
  PauliString pauli;

  std::vector<int> support() const { return pauli.support(); }

  ComplexMatrix projector() const {
    const ComplexMatrix p = pauli.dense();
    return 0.5 * (identity(p.rows()) + static_cast<double>(sign) * p);
  }

  ComplexMatrix dense() const { return scale * projector(); }
};

/// sum_m h_m = H + shift * I.
struct PositiveDecomposition {
  int qubits = 0;
  std::vector<PositiveTerm> terms;
  double shift = 0.0;

  ComplexMatrix dense_sum() const {
    const Index dim = dim_of(qubits);
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    for (const auto& t : terms) m += t.dense();
    return m;
  }
};

/// alpha P = 2|alpha| (I + sign(alpha) P)/2 - |alpha| I. The identity term of
/// H, if any, is folded into the shift.
inline PositiveDecomposition positive_decomposition(const PauliSumHamiltonian& h) {
  PositiveDecomposition d;
  d.qubits = h.qubits();
  double abs_sum = 0.0;
  for (const auto& t : h.terms()) {
    if (t.string.is_identity()) continue;
    d.terms.push_back({2.0 * std::abs(t.coefficient), t.coefficient > 0 ? 1 : -1, t.string});
    abs_sum += std::abs(t.coefficient);
  }
  d.shift = abs_sum - h.identity_coefficient();
  return d;
}

/// Chain or graph Hamiltonian of hard-core bosons mapped to qubits:
/// -(J/2) sum_e (XX + YY) + (U/4) sum_e ZZ + sum_i field_i Z_i.
/// Terms are emitted grouped as all XX, all YY, all ZZ, then Z.
inline PauliSumHamiltonian hopping_graph(int n_sites, const std::vector<std::pair<int, int>>& edges,
                                         double J, double U, const std::vector<double>& field) {
  PauliSumHamiltonian h(n_sites);
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n_sites || b >= n_sites || a == b) {
      throw DimensionError("invalid edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    }
  }
  for (const char op : {'X', 'Y', 'Z'}) {
    const double c = op == 'Z' ? U / 4.0 : -J / 2.0;
    for (const auto& [a, b] : edges) h.add(c, PauliString::on(n_sites, {a, b}, op));
  }
  for (int i = 0; i < n_sites; ++i) h.add(field[static_cast<std::size_t>(i)], PauliString::on(n_sites, {i}, 'Z'));
  return h;
}

inline std::vector<std::pair<int, int>> chain_edges(int n_sites) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n_sites; ++i) e.emplace_back(i, i + 1);
  return e;
}

/// Hard-core Bose-Hubbard model on an arbitrary graph. The local field is
/// -(U/4) * degree(i), which on a chain gives -U/2 inside and -U/4 at the ends.
inline PauliSumHamiltonian hardcore_bose_hubbard(int n_sites,
                                                 const std::vector<std::pair<int, int>>& edges,
                                                 double J, double U) {
  if (n_sites < 2) throw DomainError("hard-core Bose-Hubbard model needs at least 2 sites");
  std::vector<double> field(static_cast<std::size_t>(n_sites), 0.0);
  for (const auto& [a, b] : edges) {
    if (a >= 0 && a < n_sites) field[static_cast<std::size_t>(a)] -= U / 4.0;
    if (b >= 0 && b < n_sites) field[static_cast<std::size_t>(b)] -= U / 4.0;
  }
  return hopping_graph(n_sites, edges, J, U, field);
}

inline PauliSumHamiltonian hardcore_bose_hubbard_1d(int n_sites, double J, double U) {
  if (n_sites < 2) throw DomainError("hard-core Bose-Hubbard model needs at least 2 sites");
  return hardcore_bose_hubbard(n_sites, chain_edges(n_sites), J, U);
}

/// Same chain shape with hopping written as t (J = -t) and a uniform field h.
inline PauliSumHamiltonian heisenberg_like_1d(int n_sites, double t, double U, double h) {
  if (n_sites < 2) throw DomainError("chain needs at least 2 sites");
  return hopping_graph(n_sites, chain_edges(n_sites), -t, U,
                       std::vector<double>(static_cast<std::size_t>(n_sites), h));
}

/// sum_i Z_i as a dense diagonal operator.
inline ComplexMatrix total_z(int qubits) {
  const Index dim = dim_of(qubits);
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    m(j, j) = qubits - 2 * std::popcount(static_cast<std::uint64_t>(j));
  }
  return m;
}

// Text format:
//   # gibbsq hamiltonian v1
//   qubits <n>
//   term <letters> <coefficient>
// Coefficients are printed with 17 significant digits and round-trip exactly.

inline void write_hamiltonian(std::ostream& os, const PauliSumHamiltonian& h) {
  os << "# gibbsq hamiltonian v1\n";
  os << "qubits " << h.qubits() << "\n";
  char buf[64];
  for (const auto& t : h.terms()) {
    std::snprintf(buf, sizeof buf, "%.17g", t.coefficient);
    os << "term " << t.string.letters() << " " << buf << "\n";
  }
}

inline std::string to_text(const PauliSumHamiltonian& h) {
  std::ostringstream os;
  write_hamiltonian(os, h);
  return os.str();
}

inline PauliSumHamiltonian read_hamiltonian(std::istream& is) {
  std::string line;
  int line_no = 0;
  int qubits = -1;
  PauliSumHamiltonian h;
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    auto fail = [&](const std::string& what) {
      throw DomainError("hamiltonian line " + std::to_string(line_no) + ": " + what);
    };
    if (key == "qubits") {
      if (qubits >= 0) fail("duplicate qubits record");
      if (!(ls >> qubits) || qubits < 1) fail("bad qubit count");
      h = PauliSumHamiltonian(qubits);
    } else if (key == "term") {
      if (qubits < 0) fail("term before qubits record");
      std::string letters, coeff;
      if (!(ls >> letters >> coeff)) fail("expected 'term <letters> <coefficient>'");
      std::size_t used = 0;
      double c = 0.0;
      try {
        c = std::stod(coeff, &used);
      } catch (const std::exception&) {
        fail("bad coefficient '" + coeff + "'");
      }
      if (used != coeff.size()) fail("bad coefficient '" + coeff + "'");
      if (static_cast<int>(letters.size()) != qubits) fail("term length differs from qubit count");
      h.add(c, PauliString(letters));
    } else {
      fail("unknown record '" + key + "'");
    }
  }
  if (qubits < 0) throw DomainError("hamiltonian text has no qubits record");
  return h;
}

inline PauliSumHamiltonian from_text(const std::string& text) {
  std::istringstream is(text);
  return read_hamiltonian(is);
}

}  // namespace gibbsq
