// Copyright 2026 The rmtbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmtbench/circuit.hpp"
#include "rmtbench/linalg.hpp"

namespace rmtbench {

// Basis gate in the exporter's target set {U(theta, phi, lambda), CX}.
// Qubit fields are local (0 = the gate's q0, 1 = q1) inside a decomposition
// and register indices once placed in a program.
struct BasisGate {
  enum class Kind { kU, kCX };
  Kind kind = Kind::kU;
  std::size_t target = 0;
  std::size_t control = 0;  // CX only
  double theta = 0.0, phi = 0.0, lambda = 0.0;
};

// OpenQASM 3 U gate matrix.
ComplexMatrix u_gate_matrix(double theta, double phi, double lambda);

// ZYZ angles of a 2x2 unitary, exact up to global phase.
std::array<double, 3> u_gate_angles(const ComplexMatrix& v);

// Max entrywise |a * e^{i phi} - b| minimised (to first order) over phi.
double phase_invariant_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// Canonical (KAK) form U ~ (A1 (x) A0) exp(i(a XX + b YY + c ZZ)) (C1 (x) C0),
// emitted as three CX gates and seven U gates in time order. Throws
// kDecompositionFailure if the recomposed gate misses u by more than 1e-8.
std::vector<BasisGate> decompose_two_qubit(const ComplexMatrix& u);

// Multiplies a local two-qubit gate sequence back into a 4x4 unitary.
ComplexMatrix recompose_two_qubit(const std::vector<BasisGate>& gates);

struct QasmProgram {
  std::string source;
  std::size_t n_qubits = 0;
  std::size_t n_clbits = 0;
  nlohmann::json metadata = nlohmann::json::object();
};

struct QasmExportOptions {
  // Fresh-ancilla layout: one ancilla block per repetition, measured but not
  // reset. Default is the reuse layout (measure + reset between blocks).
  bool fresh_ancilla = false;
  // Emitted as "// key: value" comment lines (e.g. seed, config_hash).
  nlohmann::json metadata = nlohmann::json::object();
};

// Repeats the circuit body `repetitions` times with the ancilla measure/reset
// between blocks and ends with a measurement of every system qubit into
// out[k] (out[0] = system qubit 0, least significant bit).
QasmProgram export_qasm(const CircuitIR& c, std::size_t repetitions, const QasmExportOptions& options = {});

}  // namespace rmtbench
