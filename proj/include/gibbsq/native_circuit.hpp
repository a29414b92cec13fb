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

// Native-gate compilation of monitored gates for Pauli terms Z, XX, YY and ZZ.
//
// With the ancilla A prepared in |0>, the gate exp(i phi Pi (x) X_A) for
// Pi = (I + s P)/2 equals RX(s phi) C_P RX(phi) applied right to left, where
// RX(phi) = exp(i phi X_A / 2) and C_P is P on the system controlled by A.
// C_P is built from CNOTs conjugated by H (for Z) or S (for Y).

#pragma once

#include <cmath>
#include <span>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gibbsq/hamiltonian.hpp"
#include "gibbsq/universal.hpp"

namespace gibbsq {

enum class GateKind { kH, kS, kSdg, kRX, kCNOT, kMeasurePostselect };

struct NativeGate {
  GateKind kind;
  std::vector<int> qubits;  // CNOT: {control, target}
  double angle = 0.0;       // RX only
};

inline const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::kH: return "H";
    case GateKind::kS: return "S";
    case GateKind::kSdg: return "SDG";
    case GateKind::kRX: return "RX";
    case GateKind::kCNOT: return "CNOT";
    case GateKind::kMeasurePostselect: return "MEASURE_POSTSELECT";
  }
  return "?";
}

/// Gates in application order on `qubits` wires; the ancilla is wire `ancilla`.
struct NativeCircuit {
  int qubits = 0;
  int ancilla = 0;
  std::vector<NativeGate> gates;

  void append(const NativeCircuit& other) {
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
  }

  /// Product of the unitary gates. Measurement markers are skipped.
  ComplexMatrix unitary() const {
    ComplexMatrix u = identity(dim_of(qubits));
    const cplx i(0.0, 1.0);
    for (const auto& g : gates) {
      ComplexMatrix local;
      switch (g.kind) {
        case GateKind::kH:
          local = (pauli::X() + pauli::Z()) / std::sqrt(2.0);
          break;
        case GateKind::kS:
          local = ComplexMatrix::Identity(2, 2);
          local(1, 1) = i;
          break;
        case GateKind::kSdg:
          local = ComplexMatrix::Identity(2, 2);
          local(1, 1) = -i;
          break;
        case GateKind::kRX:
          local = std::cos(0.5 * g.angle) * pauli::I() + i * std::sin(0.5 * g.angle) * pauli::X();
          break;
        case GateKind::kCNOT:
          // Bit 0 = control, bit 1 = target.
          local = ComplexMatrix::Zero(4, 4);
          local(0, 0) = local(2, 2) = 1.0;
          local(3, 1) = local(1, 3) = 1.0;
          break;
        case GateKind::kMeasurePostselect:
          continue;
      }
      u = kron_embed(local, std::span<const int>(g.qubits), qubits) * u;
    }
    return u;
  }
};

/// exp(i phi Pi (x) X_A) = I + (cos phi - 1) Pi (x) I + i sin phi Pi (x) X_A.
inline ComplexMatrix reference_gate(const PositiveTerm& term, double phi) {
  const int n = term.pauli.qubits();
  const ComplexMatrix pi = kron_embed(term.projector(), [&] {
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) v[static_cast<std::size_t>(q)] = q;
    return v;
  }(), n + 1);
  const ComplexMatrix xa = kron_embed(pauli::X(), {n}, n + 1);
  return identity(pi.rows()) + (std::cos(phi) - 1.0) * pi + cplx(0.0, std::sin(phi)) * pi * xa;
}

/// Native sequence for one monitored gate with rotation angle phi = theta v.
inline NativeCircuit compile_native(const PositiveTerm& term, double theta, double v) {
  const int n = term.pauli.qubits();
  const auto support = term.support();
  const std::string letters = term.pauli.support_letters();
  const bool single_z = letters == "Z";
  const bool pair = letters == "XX" || letters == "YY" || letters == "ZZ";
  if (!single_z && !pair) {
    throw DomainError("unsupported term for native compilation: " + term.pauli.letters());
  }
  const int a = n;
  const double phi = theta * v;
  NativeCircuit c{n + 1, a, {}};
  auto basis = [&](bool before) {
    for (int q : support) {
      if (letters[0] == 'Z') c.gates.push_back({GateKind::kH, {q}});
      if (letters[0] == 'Y') c.gates.push_back({before ? GateKind::kSdg : GateKind::kS, {q}});
    }
  };
  c.gates.push_back({GateKind::kRX, {a}, term.sign * phi});
  basis(true);
  for (int q : support) c.gates.push_back({GateKind::kCNOT, {a, q}});
  basis(false);
  c.gates.push_back({GateKind::kRX, {a}, phi});
  c.gates.push_back({GateKind::kMeasurePostselect, {a}});
  return c;
}

/// One cycle of the universal algorithm for angles theta[m] of this cycle.
inline NativeCircuit compile_cycle(const GateSchedule& sched, const std::vector<double>& thetas,
                                   double beta, int d) {
  if (thetas.size() != sched.gates.size()) throw DimensionError("one angle per gate is required");
  NativeCircuit out;
  for (std::size_t m = 0; m < sched.gates.size(); ++m) {
    const auto* t = std::get_if<PositiveTerm>(&sched.gates[m].generator);
    if (!t) throw DomainError("only Pauli projector terms have a native compilation");
    const NativeCircuit c = compile_native(*t, thetas[m], detail::gate_speed(beta, d, t->scale));
    if (m == 0) {
      out.qubits = c.qubits;
      out.ancilla = c.ancilla;
    }
    out.append(c);
  }
  return out;
}

/// Largest deviation between the compiled and reference gates on inputs
/// with the ancilla in |0>.
inline double native_mismatch(const PositiveTerm& term, double theta, double v) {
  const ComplexMatrix u = compile_native(term, theta, v).unitary();
  const ComplexMatrix r = reference_gate(term, theta * v);
  const Index half = u.rows() / 2;  // ancilla is the top bit
  return max_abs(u.leftCols(half) - r.leftCols(half));
}

// Line format, one gate per line:
//   H <q> | S <q> | SDG <q> | RX <q> <angle> | CNOT <control> <target>
//   MEASURE_POSTSELECT <ancilla> 0
inline void write_circuit(std::ostream& os, const NativeCircuit& c, const std::string& comment = "") {
  os << "# gibbsq native circuit v1\n";
  os << "# qubits " << c.qubits << " ancilla " << c.ancilla << "\n";
  if (!comment.empty()) os << "# " << comment << "\n";
  char buf[64];
  for (const auto& g : c.gates) {
    os << gate_name(g.kind);
    for (int q : g.qubits) os << " " << q;
    if (g.kind == GateKind::kRX) {
      std::snprintf(buf, sizeof buf, " %.17g", g.angle);
      os << buf;
    }
    if (g.kind == GateKind::kMeasurePostselect) os << " 0";
    os << "\n";
  }
}

inline NativeCircuit read_circuit(std::istream& is) {
  NativeCircuit c;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) continue;
    if (name == "#") {
      std::string key;
      if (ls >> key && key == "qubits") {
        std::string tag;
        ls >> c.qubits >> tag >> c.ancilla;
      }
      continue;
    }
    NativeGate g{GateKind::kH, {}};
    int arity = 1;
    if (name == "H") g.kind = GateKind::kH;
    else if (name == "S") g.kind = GateKind::kS;
    else if (name == "SDG") g.kind = GateKind::kSdg;
    else if (name == "RX") g.kind = GateKind::kRX;
    else if (name == "CNOT") { g.kind = GateKind::kCNOT; arity = 2; }
    else if (name == "MEASURE_POSTSELECT") g.kind = GateKind::kMeasurePostselect;
    else throw DomainError("circuit line " + std::to_string(line_no) + ": unknown gate " + name);
    for (int k = 0; k < arity; ++k) {
      int q;
      if (!(ls >> q)) throw DomainError("circuit line " + std::to_string(line_no) + ": missing qubit");
      g.qubits.push_back(q);
    }
    if (g.kind == GateKind::kRX && !(ls >> g.angle)) {
      throw DomainError("circuit line " + std::to_string(line_no) + ": missing angle");
    }
    c.gates.push_back(g);
  }
  return c;
}

}  // namespace gibbsq
