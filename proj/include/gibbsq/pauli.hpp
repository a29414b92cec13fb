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
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gibbsq/linalg.hpp"

namespace gibbsq {

/// Tensor product of single-qubit Paulis. Character k of the string acts on
/// qubit k, so "XZ" is X on qubit 0 and Z on qubit 1.
class PauliString {
 public:
  PauliString() = default;

  explicit PauliString(std::string_view letters) : ops_(letters) {
    if (ops_.size() > static_cast<std::size_t>(kMaxQubits)) {
      throw DimensionError("Pauli string longer than " + std::to_string(kMaxQubits) + " qubits");
    }
    for (char& c : ops_) {
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
      if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
        throw DomainError("invalid Pauli letter '" + std::string(1, c) + "' in \"" +
                          std::string(letters) + "\"");
      }
    }
  }

  static PauliString identity(int qubits) {
    return PauliString(std::string(static_cast<std::size_t>(qubits), 'I'));
  }

  /// Single letter `op` on each of `qubits`, identity elsewhere.
  static PauliString on(int total_qubits, std::initializer_list<int> qubits, char op) {
    std::string s(static_cast<std::size_t>(total_qubits), 'I');
    for (int q : qubits) {
      if (q < 0 || q >= total_qubits) throw DimensionError("qubit index out of range");
      s[static_cast<std::size_t>(q)] = op;
    }
    return PauliString(s);
  }

  int qubits() const { return static_cast<int>(ops_.size()); }
  const std::string& letters() const { return ops_; }
  char at(int q) const { return ops_[static_cast<std::size_t>(q)]; }

  bool is_identity() const { return ops_.find_first_not_of('I') == std::string::npos; }

  std::vector<int> support() const {
    std::vector<int> s;
    for (int q = 0; q < qubits(); ++q) {
      if (at(q) != 'I') s.push_back(q);
    }
    return s;
  }

  /// Letters restricted to the support, in support order.
  std::string support_letters() const {
    std::string s;
    for (char c : ops_) {
      if (c != 'I') s.push_back(c);
    }
    return s;
  }

  std::uint64_t x_mask() const { return mask_of('X', 'Y'); }
  std::uint64_t z_mask() const { return mask_of('Z', 'Y'); }

  /// P|j> = phase(j) |j ^ x_mask>.
  cplx phase(std::uint64_t j) const {
    int y_count = 0;
    for (char c : ops_) y_count += c == 'Y';
    // Y = i X Z, so each Y contributes a factor i before the Z sign.
    static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    cplx p = kIPow[y_count % 4];
    if (std::popcount(j & z_mask()) % 2 == 1) p = -p;
    return p;
  }

  ComplexMatrix dense() const {
    const Index dim = dim_of(qubits());
    const std::uint64_t xm = x_mask();
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    for (Index j = 0; j < dim; ++j) {
      const auto col = static_cast<std::uint64_t>(j);
      m(static_cast<Index>(col ^ xm), j) = phase(col);
    }
    return m;
  }

  bool commutes_with(const PauliString& other) const {
    if (other.qubits() != qubits()) throw DimensionError("Pauli strings of different length");
    const int anti = std::popcount(x_mask() & other.z_mask()) +
                     std::popcount(z_mask() & other.x_mask());
    return anti % 2 == 0;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::uint64_t mask_of(char a, char b) const {
    std::uint64_t m = 0;
    for (int q = 0; q < qubits(); ++q) {
      if (at(q) == a || at(q) == b) m |= 1ULL << q;
    }
    return m;
  }

  std::string ops_;
};

namespace pauli {

inline ComplexMatrix I() { return ComplexMatrix::Identity(2, 2); }
inline ComplexMatrix X() { return PauliString("X").dense(); }
inline ComplexMatrix Y() { return PauliString("Y").dense(); }
inline ComplexMatrix Z() { return PauliString("Z").dense(); }

}  // namespace pauli

}  // namespace gibbsq
