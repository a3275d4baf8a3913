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

#include <optional>

#include "rmtbench/channel.hpp"
#include "rmtbench/circuit.hpp"
#include "rmtbench/linalg.hpp"
#include "rmtbench/noise.hpp"
#include "rmtbench/rng.hpp"

namespace rmtbench {

enum class MeasurementMode {
  kDeterministic,  // trace out the ancilla (unbiased average over outcomes)
  kTrajectory,     // sample an outcome, project, renormalise
};

enum class AncillaMode {
  kReuse,  // measured ancilla is reset in place to rho(p)
  kFresh,  // every step couples to a fresh |0> ancilla, bypassing faulty reset
};

struct SimOptions {
  MeasurementMode measurement = MeasurementMode::kDeterministic;
  AncillaMode ancilla = AncillaMode::kReuse;
};

// Full-register state (system (x) ancillas, ancillas in the low bits).
struct SimState {
  DensityMatrix rho;
  RngStream rng;

  // Embeds a system state with the ancillas in their prepared state.
  static SimState prepare(const DensityMatrix& system, const CircuitIR& c, const NoiseModel& noise,
                          const SimOptions& options, RngStream rng);
  DensityMatrix system_marginal(std::size_t n_ancilla) const;
};

// The state an ancilla is (re)prepared in under the given options.
DensityMatrix ancilla_ready_state(const NoiseModel& noise, const SimOptions& options);

// One application of the circuit: layers (gates, then depolarising noise on
// each gate pair, then relaxation of every qubit for gate_duration), then the
// terminal measure/reset block. Throws kInvalidState if any intermediate state
// leaves the density-matrix set.
SimState simulate_step(SimState state, const CircuitIR& c, const NoiseModel& noise, const SimOptions& options = {});

// Deterministic step on an arbitrary (not necessarily positive) operator; the
// map is linear, which is what channel extraction needs.
ComplexMatrix simulate_step_linear(ComplexMatrix x, const CircuitIR& c, const NoiseModel& noise,
                                   const SimOptions& options = {});

// Noiseless (nullopt): Stinespring blocks K_i = <i|U|0> of the circuit unitary.
// Noisy: simulate the N^2 matrix units, assemble the Choi matrix, from_choi.
KrausChannel circuit_to_channel(const CircuitIR& c, const std::optional<NoiseModel>& noise,
                                const SimOptions& options = {});

}  // namespace rmtbench
