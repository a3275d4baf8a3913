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

// Noise channels on qubit registers and shot sampling.
//
// Register convention: qubit k is bit k of the basis-state index (qubit 0 is
// the least significant bit). A register density matrix over n qubits is
// 2^n x 2^n.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rmtbench/histogram.hpp"
#include "rmtbench/linalg.hpp"
#include "rmtbench/rng.hpp"

namespace rmtbench {

struct ReadoutError {
  double p1_given_0 = 0.0;  // report 1 when the qubit was 0
  double p0_given_1 = 0.0;  // report 0 when the qubit was 1
};

// One Table-I-style calibration row. Absent T1 means no relaxation; absent
// T2 defaults to the amplitude-damping limit 2*T1. `readout` is a symmetric
// flip probability; p1_given_0 / p0_given_1 override it per direction.
struct QubitNoise {
  std::optional<double> t1_us;
  std::optional<double> t2_us;
  double readout = 0.0;
  std::optional<double> p1_given_0;
  std::optional<double> p0_given_1;

  ReadoutError readout_error() const noexcept;
  bool has_relaxation() const noexcept { return t1_us.has_value(); }
  double effective_t2_us() const;
};

struct NoiseModel {
  // Depolarising error weight w per two-qubit gate, applied to the gate's pair:
  // rho -> (1 - w) rho + w I/4 (x) Tr_pair(rho).
  double depolarizing = 0.0;
  // Faulty reset: the ancilla is re-prepared as (1 - p)|0><0| + p|1><1|.
  double reset_error = 0.0;
  double gate_duration_us = 0.0;
  double measurement_duration_us = 1.0;
  // Indexed by register qubit (ancillas first). Missing rows are ideal.
  std::vector<QubitNoise> qubits;

  // Throws kInvalidParams / kOutOfRange on out-of-range parameters.
  void validate() const;
  QubitNoise qubit(std::size_t index) const;
  bool has_relaxation() const noexcept;
  std::vector<ReadoutError> readout_errors(std::size_t first_qubit, std::size_t count) const;
};

NoiseModel noise_from_json(const nlohmann::json& doc);
nlohmann::json noise_to_json(const NoiseModel& noise);

// (1 - p)|0><0| + p|1><1|. Throws kOutOfRange unless p in [0, 0.5].
DensityMatrix faulty_reset_state(double p);

// Throws kOutOfRange unless weight in [0, 1].
DensityMatrix depolarize(const DensityMatrix& rho, double weight, std::span<const std::size_t> qubits);

// Amplitude damping with gamma_1 = 1 - exp(-duration/T1) followed by pure
// dephasing so that coherences decay as exp(-duration/T2).
// Throws kInvalidParams if T2 > 2 T1 or any time is negative.
DensityMatrix thermal_relax(const DensityMatrix& rho, double t1_us, double t2_us, double duration_us,
                            std::size_t qubit);

// Multinomial sampling of diag(rho) followed by independent per-qubit
// readout flips. Missing readout entries mean no readout error.
Histogram sample_shots(const DensityMatrix& rho, std::uint64_t shots, std::span<const ReadoutError> readout,
                       RngStream& rng);

namespace kernels {

std::size_t qubit_count(const ComplexMatrix& rho);

// rho -> U rho U^dag with U a 4x4 matrix indexed by bit(q0) + 2*bit(q1).
void apply_two_qubit(ComplexMatrix& rho, const ComplexMatrix& u, std::size_t q0, std::size_t q1);
void depolarize(ComplexMatrix& rho, double weight, std::span<const std::size_t> qubits);
void thermal_relax(ComplexMatrix& rho, double t1_us, double t2_us, double duration_us, std::size_t qubit);
// Traces out `qubit` and re-inserts it in the 2x2 state `replacement`.
void reset_qubit(ComplexMatrix& rho, std::size_t qubit, const ComplexMatrix& replacement);
// Projects `qubit` onto |outcome>; returns the outcome probability. The
// result is unnormalised.
double project_qubit(ComplexMatrix& rho, std::size_t qubit, int outcome);
// Traces out the `low_qubits` least significant qubits.
ComplexMatrix trace_out_low_qubits(const ComplexMatrix& rho, std::size_t low_qubits);

}  // namespace kernels

}  // namespace rmtbench
