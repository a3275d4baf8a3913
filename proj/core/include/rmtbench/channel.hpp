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

// CPTP maps in operator-sum form, their superoperator and Choi matrices, and
// the random-channel constructions (Ginibre-Kraus, Stinespring, random Choi).
//
// Conventions:
//   superoperator  S = sum_i conj(K_i) (x) K_i acting on column-stacked vec(rho)
//   Choi matrix    C = sum_{ij} |i><j| (x) E(|i><j|), input factor first,
//                  unnormalised, so trace preservation <=> Tr_out C = I.
//   Stinespring    environment index is the least significant factor of the
//                  dilation; K_i = <e_i| U |e_0>.

#include <cstddef>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rmtbench/linalg.hpp"
#include "rmtbench/rng.hpp"

namespace rmtbench {

inline constexpr double kTracePreservationTolerance = 1e-10;

class KrausChannel {
 public:
  // Throws kDimensionMismatch for inconsistent operators, kInvalidParams for
  // an empty list or rank above dim^2, kNotTP when ||sum K^dag K - I||_max
  // exceeds `tp_tolerance`.
  explicit KrausChannel(std::vector<ComplexMatrix> kraus_ops,
                        double tp_tolerance = kTracePreservationTolerance);

  static KrausChannel identity(std::size_t dim);
  static KrausChannel unitary(const UnitaryMatrix& u);
  // rho -> Tr(rho) I/N, written with the N^2 operators |i><j|/sqrt(N).
  static KrausChannel completely_depolarizing(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return ops_.size(); }
  const std::vector<ComplexMatrix>& kraus_ops() const noexcept { return ops_; }

  double trace_preservation_error() const;

 private:
  std::size_t dim_;
  std::vector<ComplexMatrix> ops_;
};

struct Superoperator {
  ComplexMatrix matrix;  // N^2 x N^2, column-stacking convention
  std::size_t system_dim = 0;
};

struct ChoiMatrix {
  ComplexMatrix matrix;  // N^2 x N^2, input factor first
  std::size_t system_dim = 0;
};

DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho);
// Linear action on an arbitrary operator; no state validation.
ComplexMatrix apply_linear(const KrausChannel& channel, const ComplexMatrix& x);
DensityMatrix iterate(const KrausChannel& channel, const DensityMatrix& rho, std::size_t steps);

// K_i = G_i S^{-1/2}, S = sum_i G_i^dag G_i. A numerically singular S is
// resampled at most three times before kSingular is thrown.
KrausChannel random_ginibre_kraus(std::size_t n_qubits, std::size_t rank, RngStream& rng);
// Kraus blocks of a Haar unitary on dimension 2^n * rank.
KrausChannel random_stinespring(std::size_t n_qubits, std::size_t rank, RngStream& rng);
// Wishart Choi matrix of the given rank, rescaled so Tr_out C = I.
KrausChannel random_choi_channel(std::size_t n_qubits, std::size_t rank, RngStream& rng);

Superoperator to_superoperator(const KrausChannel& channel);
ChoiMatrix to_choi(const KrausChannel& channel);

struct FromChoiOptions {
  double kraus_cutoff = 1e-10;
  double cp_tolerance = 1e-9;
  double tp_tolerance = 1e-8;
};

// Kraus operators from the Hermitian eigendecomposition of the Choi matrix.
// Throws kNotCP for a negative eigenvalue below -cp_tolerance and kNotTP when
// Tr_out C deviates from I by more than tp_tolerance.
KrausChannel from_choi(const ChoiMatrix& choi, const FromChoiOptions& options = {});

// (outer o inner)(rho) = outer(inner(rho)). Compressed through the Choi
// matrix when the product rank would exceed dim^2.
KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner);

nlohmann::json channel_to_json(const KrausChannel& channel);
KrausChannel channel_from_json(const nlohmann::json& doc);

}  // namespace rmtbench
