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

#include "rmtbench/simulator.hpp"

#include <cmath>
#include <string>

#include "rmtbench/errors.hpp"

namespace rmtbench {
namespace {

using Index = Eigen::Index;

class Checker {
 public:
  explicit Checker(bool enabled) : enabled_(enabled) {}
  void operator()(const ComplexMatrix& rho, const char* where) const {
    if (!enabled_) return;
    if (auto why = density_violation(rho); !why.empty())
      throw Error(ErrorCode::kInvalidState, std::string("after ") + where + ": " + why);
  }

 private:
  bool enabled_;
};

void relax_all(ComplexMatrix& rho, const NoiseModel& noise, std::size_t n_qubits, double duration_us) {
  if (duration_us <= 0.0) return;
  for (std::size_t q = 0; q < n_qubits; ++q) {
    const QubitNoise row = noise.qubit(q);
    if (row.has_relaxation()) kernels::thermal_relax(rho, *row.t1_us, row.effective_t2_us(), duration_us, q);
  }
}

void run_layers(ComplexMatrix& rho, const CircuitIR& c, const NoiseModel& noise, const Checker& check) {
  const bool relax = noise.has_relaxation() && noise.gate_duration_us > 0.0;
  for (const auto& layer : c.layers) {
    for (const auto& g : layer.gates) kernels::apply_two_qubit(rho, g.u.matrix(), g.q0, g.q1);
    check(rho, "gate layer");
    if (noise.depolarizing > 0.0) {
      for (const auto& g : layer.gates) {
        const std::size_t pair[2] = {g.q0, g.q1};
        kernels::depolarize(rho, noise.depolarizing, pair);
      }
      check(rho, "depolarizing noise");
    }
    if (relax) {
      relax_all(rho, noise, c.n_qubits(), noise.gate_duration_us);
      check(rho, "gate relaxation");
    }
  }
  if (noise.has_relaxation()) {
    relax_all(rho, noise, c.n_qubits(), noise.measurement_duration_us);
    check(rho, "measurement relaxation");
  }
}

ComplexMatrix ancilla_register_state(const CircuitIR& c, const NoiseModel& noise, const SimOptions& options) {
  const ComplexMatrix one = ancilla_ready_state(noise, options).matrix();
  ComplexMatrix out = one;
  for (std::size_t a = 1; a < c.n_ancilla; ++a) out = kron(one, out);
  return out;
}

void check_dims(const ComplexMatrix& rho, const CircuitIR& c) {
  if (static_cast<std::size_t>(rho.rows()) != (std::size_t{1} << c.n_qubits()) || rho.rows() != rho.cols())
    throw Error(ErrorCode::kDimensionMismatch, "state does not match the circuit register");
}

}  // namespace

DensityMatrix ancilla_ready_state(const NoiseModel& noise, const SimOptions& options) {
  return options.ancilla == AncillaMode::kFresh ? DensityMatrix::basis_state(2, 0)
                                                : faulty_reset_state(noise.reset_error);
}

SimState SimState::prepare(const DensityMatrix& system, const CircuitIR& c, const NoiseModel& noise,
                           const SimOptions& options, RngStream rng) {
  c.validate();
  if (system.dim() != c.system_dim()) throw Error(ErrorCode::kDimensionMismatch, "system state does not match circuit");
  return SimState{DensityMatrix(kron(system.matrix(), ancilla_register_state(c, noise, options))), std::move(rng)};
}

DensityMatrix SimState::system_marginal(std::size_t n_ancilla) const {
  return DensityMatrix(kernels::trace_out_low_qubits(rho.matrix(), n_ancilla));
}

SimState simulate_step(SimState state, const CircuitIR& c, const NoiseModel& noise, const SimOptions& options) {
  c.validate();
  noise.validate();
  ComplexMatrix rho = state.rho.matrix();
  check_dims(rho, c);
  const Checker check(true);
  run_layers(rho, c, noise, check);

  const ComplexMatrix ready = ancilla_ready_state(noise, options).matrix();
  for (const auto& op : c.terminal_ops) {
    if (options.measurement == MeasurementMode::kTrajectory) {
      ComplexMatrix projected = rho;
      const double p0 = kernels::project_qubit(projected, op.ancilla, 0);
      const int outcome = state.rng.uniform() < p0 ? 0 : 1;
      if (outcome == 1) {
        projected = rho;
        kernels::project_qubit(projected, op.ancilla, 1);
      }
      const double norm = projected.trace().real();
      if (!(norm > 0.0)) throw Error(ErrorCode::kInvalidState, "projected onto a zero-probability outcome");
      rho = projected / norm;
    }
    kernels::reset_qubit(rho, op.ancilla, ready);
    check(rho, "measure/reset");
  }
  state.rho = DensityMatrix(std::move(rho));
  return state;
}

ComplexMatrix simulate_step_linear(ComplexMatrix x, const CircuitIR& c, const NoiseModel& noise,
                                   const SimOptions& options) {
  check_dims(x, c);
  run_layers(x, c, noise, Checker(false));
  const ComplexMatrix ready = ancilla_ready_state(noise, options).matrix();
  for (const auto& op : c.terminal_ops) kernels::reset_qubit(x, op.ancilla, ready);
  return x;
}

KrausChannel circuit_to_channel(const CircuitIR& c, const std::optional<NoiseModel>& noise, const SimOptions& options) {
  c.validate();
  const auto n = static_cast<Index>(c.system_dim());
  const auto a_dim = static_cast<Index>(c.ancilla_dim());

  if (!noise) {
    const ComplexMatrix u = circuit_unitary(c);
    std::vector<ComplexMatrix> ops;
    for (Index i = 0; i < a_dim; ++i) {
      ComplexMatrix k(n, n);
      for (Index out = 0; out < n; ++out)
        for (Index in = 0; in < n; ++in) k(out, in) = u(out * a_dim + i, in * a_dim);
      if (k.norm() > 1e-12) ops.push_back(std::move(k));
    }
    return KrausChannel(std::move(ops));
  }

  noise->validate();
  const ComplexMatrix anc = ancilla_register_state(c, *noise, options);
  ChoiMatrix choi{ComplexMatrix::Zero(n * n, n * n), static_cast<std::size_t>(n)};
  ComplexMatrix unit = ComplexMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index k = 0; k < n; ++k) {
      unit(j, k) = 1.0;
      const ComplexMatrix out =
          kernels::trace_out_low_qubits(simulate_step_linear(kron(unit, anc), c, *noise, options), c.n_ancilla);
      unit(j, k) = 0.0;
      choi.matrix.block(j * n, k * n, n, n) = out;
    }
  // Exact Choi matrices are Hermitian; clear the rounding asymmetry.
  choi.matrix = (0.5 * (choi.matrix + choi.matrix.adjoint())).eval();
  return from_choi(choi);
}

}  // namespace rmtbench
