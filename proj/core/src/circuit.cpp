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

#include "rmtbench/circuit.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>
#include <nlohmann/json.hpp>

#include "rmtbench/errors.hpp"
#include "rmtbench/json_io.hpp"

namespace rmtbench {
namespace {

constexpr const char* kCircuitFormat = "rmtbench.circuit/1";

Layer make_sublayer(std::size_t n_qubits, std::size_t offset, RngStream* rng) {
  Layer layer;
  for (std::size_t q = offset; q + 1 < n_qubits; q += 2) {
    UnitaryMatrix u = rng ? sample_haar_su4(*rng) : UnitaryMatrix(identity(4));
    layer.gates.push_back(Gate{q, q + 1, std::move(u)});
  }
  return layer;
}

CircuitIR build_brickwork(std::size_t n_system, std::size_t depth, std::size_t n_ancilla, RngStream* rng) {
  if (n_system < 1 || depth < 1 || n_ancilla < 1)
    throw Error(ErrorCode::kInvalidParams, "circuit needs n_system >= 1, depth >= 1, n_ancilla >= 1");
  if (n_system + n_ancilla > 12) throw Error(ErrorCode::kInvalidParams, "register too large for density-matrix simulation");
  CircuitIR c;
  c.n_system = n_system;
  c.n_ancilla = n_ancilla;
  const std::size_t n = c.n_qubits();
  for (std::size_t d = 0; d < depth; ++d) {
    c.layers.push_back(make_sublayer(n, 0, rng));
    Layer odd = make_sublayer(n, 1, rng);
    if (!odd.gates.empty()) c.layers.push_back(std::move(odd));
  }
  for (std::size_t a = 0; a < n_ancilla; ++a) c.terminal_ops.push_back(MeasureReset{a});
  return c;
}

}  // namespace

std::size_t CircuitIR::gate_count() const noexcept {
  std::size_t count = 0;
  for (const auto& layer : layers) count += layer.gates.size();
  return count;
}

void CircuitIR::validate() const {
  if (n_system < 1 || n_ancilla < 1) throw Error(ErrorCode::kInvalidParams, "circuit needs at least one system and one ancilla qubit");
  const std::size_t n = n_qubits();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    std::vector<bool> used(n, false);
    for (const auto& g : layers[l].gates) {
      if (g.q0 >= n || g.q1 >= n || g.q0 == g.q1)
        throw Error(ErrorCode::kInvalidParams, "layer " + std::to_string(l) + ": invalid qubit pair");
      if (used[g.q0] || used[g.q1])
        throw Error(ErrorCode::kInvalidParams, "layer " + std::to_string(l) + ": overlapping gate pairs");
      if (g.u.dim() != 4) throw Error(ErrorCode::kInvalidParams, "layer " + std::to_string(l) + ": gate is not 4x4");
      used[g.q0] = used[g.q1] = true;
    }
  }
  std::vector<int> measured(n_ancilla, 0);
  for (const auto& op : terminal_ops) {
    if (op.ancilla >= n_ancilla) throw Error(ErrorCode::kInvalidParams, "measure/reset on a non-ancilla qubit");
    ++measured[op.ancilla];
  }
  for (std::size_t a = 0; a < n_ancilla; ++a)
    if (measured[a] != 1)
      throw Error(ErrorCode::kInvalidParams, "ancilla " + std::to_string(a) + " must be measured exactly once");
}

UnitaryMatrix sample_haar_su4(RngStream& rng) {
  ComplexMatrix u = sample_haar_unitary(4, rng).matrix();
  const Complex det = u.determinant();
  u *= std::exp(-Complex(0.0, std::arg(det) / 4.0));
  return UnitaryMatrix(std::move(u));
}

CircuitIR build_random_circuit(std::size_t n_system, std::size_t depth, RngStream& rng, std::size_t n_ancilla) {
  return build_brickwork(n_system, depth, n_ancilla, &rng);
}

CircuitIR build_identity_circuit(std::size_t n_system, std::size_t depth, std::size_t n_ancilla) {
  return build_brickwork(n_system, depth, n_ancilla, nullptr);
}

void left_multiply_gate(ComplexMatrix& m, const ComplexMatrix& u, std::size_t q0, std::size_t q1) {
  const auto b0 = static_cast<Eigen::Index>(1) << q0;
  const auto b1 = static_cast<Eigen::Index>(1) << q1;
  Eigen::Index idx[4];
  Complex tmp[4];
  for (Eigen::Index base = 0; base < m.rows(); ++base) {
    if (base & (b0 | b1)) continue;
    idx[0] = base;
    idx[1] = base | b0;
    idx[2] = base | b1;
    idx[3] = base | b0 | b1;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (int k = 0; k < 4; ++k) {
        tmp[k] = 0.0;
        for (int l = 0; l < 4; ++l) tmp[k] += u(k, l) * m(idx[l], c);
      }
      for (int k = 0; k < 4; ++k) m(idx[k], c) = tmp[k];
    }
  }
}

ComplexMatrix circuit_unitary(const CircuitIR& c) {
  c.validate();
  ComplexMatrix u = identity(std::size_t{1} << c.n_qubits());
  for (const auto& layer : c.layers)
    for (const auto& g : layer.gates) left_multiply_gate(u, g.u.matrix(), g.q0, g.q1);
  return u;
}

nlohmann::json circuit_to_json(const CircuitIR& c) {
  nlohmann::json doc;
  doc["format"] = kCircuitFormat;
  doc["n_system"] = c.n_system;
  doc["n_ancilla"] = c.n_ancilla;
  auto& layers = doc["layers"] = nlohmann::json::array();
  for (const auto& layer : c.layers) {
    auto gates = nlohmann::json::array();
    for (const auto& g : layer.gates)
      gates.push_back({{"qubits", {g.q0, g.q1}}, {"matrix", matrix_entries_to_json(g.u.matrix())}});
    layers.push_back(std::move(gates));
  }
  auto& ops = doc["terminal_ops"] = nlohmann::json::array();
  for (const auto& op : c.terminal_ops) ops.push_back({{"op", "measure_reset"}, {"qubit", op.ancilla}});
  return doc;
}

CircuitIR circuit_from_json(const nlohmann::json& doc) {
  CircuitIR c;
  try {
    if (require_field(doc, "format").get<std::string>() != kCircuitFormat)
      throw Error(ErrorCode::kMalformedInput, "unsupported circuit format");
    c.n_system = require_field(doc, "n_system").get<std::size_t>();
    c.n_ancilla = require_field(doc, "n_ancilla").get<std::size_t>();
    for (const auto& layer_doc : require_field(doc, "layers")) {
      Layer layer;
      for (const auto& g : layer_doc) {
        const auto& qubits = require_field(g, "qubits");
        if (!qubits.is_array() || qubits.size() != 2) throw Error(ErrorCode::kMalformedInput, "gate needs two qubits");
        layer.gates.push_back(Gate{qubits[0].get<std::size_t>(), qubits[1].get<std::size_t>(),
                                   UnitaryMatrix(matrix_entries_from_json(require_field(g, "matrix"), 4, 4), 1e-9)});
      }
      c.layers.push_back(std::move(layer));
    }
    for (const auto& op : require_field(doc, "terminal_ops")) {
      if (require_field(op, "op").get<std::string>() != "measure_reset")
        throw Error(ErrorCode::kMalformedInput, "unknown terminal op");
      c.terminal_ops.push_back(MeasureReset{require_field(op, "qubit").get<std::size_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, std::string("circuit: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace rmtbench
