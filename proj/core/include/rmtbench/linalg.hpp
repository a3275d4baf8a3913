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

// Dense complex linear algebra and random-matrix sampling.
//
// Matrices are Eigen row-major dense complex matrices. Subsystem ordering for
// kron/partial_trace follows the usual tensor convention: the first listed
// subsystem is the most significant index. Vectorisation is column-stacking:
// vec(X)[i + j*rows] = X(i, j).

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rmtbench/rng.hpp"

namespace rmtbench {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

// Module-wide numerical tolerances. Callers may pass their own.
struct Tolerances {
  double hermitian = 1e-10;
  double trace = 1e-10;
  double psd = 1e-9;
  double unitary = 1e-10;
};

inline constexpr Tolerances kDefaultTolerances{};

bool all_finite(const ComplexMatrix& m) noexcept;
double max_abs(const ComplexMatrix& m) noexcept;
ComplexMatrix dagger(const ComplexMatrix& m);
ComplexMatrix identity(std::size_t dim);

ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, std::size_t rows, std::size_t cols);

// Returns an empty string when `m` is a valid density matrix under `tol`,
// otherwise a description of the first violated invariant.
std::string density_violation(const ComplexMatrix& m, const Tolerances& tol = kDefaultTolerances);

// Hermitian, unit-trace, positive semidefinite state.
class DensityMatrix {
 public:
  // Throws Error(kInvalidState) when the invariants do not hold.
  explicit DensityMatrix(ComplexMatrix m, const Tolerances& tol = kDefaultTolerances);

  static DensityMatrix basis_state(std::size_t dim, std::size_t index);
  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::vector<double> diagonal() const;

 private:
  ComplexMatrix m_;
};

class UnitaryMatrix {
 public:
  // Throws Error(kInvalidParams) when ||U^dag U - I||_max exceeds `tolerance`.
  explicit UnitaryMatrix(ComplexMatrix m, double tolerance = kDefaultTolerances.unitary);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

 private:
  ComplexMatrix m_;
};

double unitarity_error(const ComplexMatrix& m);

// Entries are i.i.d. complex Gaussians with Re, Im ~ Normal(0, 1/2).
ComplexMatrix sample_ginibre(std::size_t rows, std::size_t cols, RngStream& rng);

// Haar unitary from the QR factorisation of a Ginibre matrix, with the phases
// of diag(R) folded back into Q so the law is exactly Haar.
UnitaryMatrix sample_haar_unitary(std::size_t dim, RngStream& rng);

struct EigOptions {
  // Shifted-QR budget per row; the solver gives up after
  // max_sweeps_per_row * dim iterations.
  int max_sweeps_per_row = 30;
  bool compute_vectors = true;
};

// Eigenvalues sorted by descending modulus, ties by descending real part then
// descending imaginary part. Column k of `vectors` pairs with values[k].
struct GeneralEigen {
  std::vector<Complex> values;
  ComplexMatrix vectors;
};

// Dense general eigensolver (Hessenberg reduction + shifted QR on the Schur
// form). Throws kNonConvergence when the sweep budget is exhausted.
GeneralEigen eig_general(const ComplexMatrix& m, const EigOptions& options = {});

// max_k ||m v_k - l_k v_k|| / (||m||_F ||v_k||).
double max_relative_residual(const ComplexMatrix& m, const GeneralEigen& eig);

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // unitary, columns are eigenvectors
};

// Throws kNotHermitian when ||m - m^dag||_max > hermitian_tolerance.
HermitianEigen eig_hermitian(const ComplexMatrix& m, double hermitian_tolerance = 1e-8);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Traces out every subsystem not listed in `keep`. The kept subsystems retain
// their relative order. Throws kDimensionMismatch on inconsistent input.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

// m^{-1/2} through the Hermitian eigendecomposition. Throws kSingular when the
// smallest eigenvalue is below 1e-12 times the largest.
ComplexMatrix inv_sqrt_psd(const ComplexMatrix& m);

// Trace distance 1/2 ||a - b||_1 for Hermitian a, b.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace rmtbench
