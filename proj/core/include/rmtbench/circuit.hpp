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

#include <cstddef>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rmtbench/linalg.hpp"
#include "rmtbench/rng.hpp"

namespace rmtbench {

// A two-qubit gate. Local basis index is b(q0) + 2 b(q1), i.e. the matrix acts
// as kron(A_q1, A_q0) on the pair.
struct Gate {
  std::size_t q0 = 0;
  std::size_t q1 = 1;
  UnitaryMatrix u;
};

struct Layer {
  std::vector<Gate> gates;  // disjoint pairs, applied in parallel
};

struct MeasureReset {
  std::size_t ancilla = 0;
};

// Register layout: ancillas are qubits 0..n_ancilla-1, system qubits follow.
// Full basis index = system_index * 2^n_ancilla + ancilla_index.
struct CircuitIR {
  std::size_t n_system = 1;
  std::size_t n_ancilla = 1;
  std::vector<Layer> layers;
  std::vector<MeasureReset> terminal_ops;

  std::size_t n_qubits() const noexcept { return n_system + n_ancilla; }
  std::size_t system_dim() const noexcept { return std::size_t{1} << n_system; }
  std::size_t ancilla_dim() const noexcept { return std::size_t{1} << n_ancilla; }
  std::size_t gate_count() const noexcept;

  // Throws kInvalidParams on overlapping pairs, out-of-range qubits, or an
  // ancilla that is not measured exactly once.
  void validate() const;
};

// Haar-random 4x4 unitary rescaled to unit determinant.
UnitaryMatrix sample_haar_su4(RngStream& rng);

// Brickwork: per depth unit, an even-pair sublayer (0,1),(2,3),... then an
// odd-pair sublayer (1,2),(3,4),... over the whole register (skipped when
// empty). Every ancilla gets a terminal MeasureReset.
CircuitIR build_random_circuit(std::size_t n_system, std::size_t depth, RngStream& rng,
                               std::size_t n_ancilla = 1);

// Same wiring with identity gates; useful as a structural baseline.
CircuitIR build_identity_circuit(std::size_t n_system, std::size_t depth, std::size_t n_ancilla = 1);

// Product of all gates embedded in the full register (first layer rightmost).
ComplexMatrix circuit_unitary(const CircuitIR& c);

// m <- (gate on q0,q1) * m, touching only the affected rows.
void left_multiply_gate(ComplexMatrix& m, const ComplexMatrix& u, std::size_t q0, std::size_t q1);

nlohmann::json circuit_to_json(const CircuitIR& c);
CircuitIR circuit_from_json(const nlohmann::json& doc);

}  // namespace rmtbench
