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

#include "rmtbench/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "rmtbench/errors.hpp"

namespace rmtbench {
namespace {

using ColMajor = Eigen::MatrixXcd;

std::string describe(double value) { return std::to_string(value); }

bool modulus_order(const Complex& a, const Complex& b) {
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

double hermiticity_error(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

bool all_finite(const ComplexMatrix& m) noexcept {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

double max_abs(const ComplexMatrix& m) noexcept {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

ComplexMatrix dagger(const ComplexMatrix& m) { return m.adjoint(); }

ComplexMatrix identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return ComplexMatrix::Identity(n, n);
}

ComplexVector vec(const ComplexMatrix& m) {
  ComplexVector v(m.size());
  const Eigen::Index rows = m.rows();
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < rows; ++i) v(i + j * rows) = m(i, j);
  return v;
}

ComplexMatrix unvec(const ComplexVector& v, std::size_t rows, std::size_t cols) {
  if (static_cast<std::size_t>(v.size()) != rows * cols)
    throw Error(ErrorCode::kDimensionMismatch, "unvec: length does not match rows*cols");
  const auto r = static_cast<Eigen::Index>(rows);
  ComplexMatrix m(r, static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = v(i + j * r);
  return m;
}

std::string density_violation(const ComplexMatrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols() || m.rows() == 0) return "density matrix must be square and non-empty";
  if (!all_finite(m)) return "density matrix has non-finite entries";
  const double herm = hermiticity_error(m);
  if (herm > tol.hermitian) return "not Hermitian (max |rho - rho^dag| = " + describe(herm) + ")";
  const double trace_err = std::abs(m.trace() - Complex(1.0, 0.0));
  if (trace_err > tol.trace) return "trace deviates from 1 by " + describe(trace_err);
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ColMajor> solver(sym, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol.psd) return "not positive semidefinite (min eigenvalue " + describe(min_eig) + ")";
  return {};
}

DensityMatrix::DensityMatrix(ComplexMatrix m, const Tolerances& tol) : m_(std::move(m)) {
  if (auto why = density_violation(m_, tol); !why.empty()) throw Error(ErrorCode::kInvalidState, why);
}

DensityMatrix DensityMatrix::basis_state(std::size_t dim, std::size_t index) {
  if (index >= dim) throw Error(ErrorCode::kOutOfRange, "basis index exceeds dimension");
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw Error(ErrorCode::kInvalidParams, "pure state vector has zero norm");
  const ComplexVector unit = psi / norm;
  return DensityMatrix(unit * unit.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix(identity(dim) / static_cast<double>(dim));
}

std::vector<double> DensityMatrix::diagonal() const {
  std::vector<double> d(dim());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    d[i] = m_(k, k).real();
  }
  return d;
}

double unitarity_error(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m, double tolerance) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0)
    throw Error(ErrorCode::kDimensionMismatch, "unitary must be square and non-empty");
  const double err = unitarity_error(m_);
  if (!(err <= tolerance)) throw Error(ErrorCode::kInvalidParams, "matrix is not unitary (error " + describe(err) + ")");
}

ComplexMatrix sample_ginibre(std::size_t rows, std::size_t cols, RngStream& rng) {
  if (rows == 0 || cols == 0) throw Error(ErrorCode::kInvalidParams, "Ginibre dimensions must be positive");
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = rng.complex_normal();
  return g;
}

UnitaryMatrix sample_haar_unitary(std::size_t dim, RngStream& rng) {
  const ColMajor g = sample_ginibre(dim, dim, rng);
  Eigen::HouseholderQR<ColMajor> qr(g);
  ColMajor q = qr.householderQ();
  const ColMajor& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    q.col(k) *= mag > 0.0 ? d / mag : Complex(1.0, 0.0);
  }
  return UnitaryMatrix(ComplexMatrix(q), 1e-10);
}

GeneralEigen eig_general(const ComplexMatrix& m, const EigOptions& options) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::kDimensionMismatch, "eig_general needs a square matrix");
  if (!all_finite(m)) throw Error(ErrorCode::kInvalidParams, "eig_general input has non-finite entries");
  const Eigen::Index n = m.rows();
  GeneralEigen out;
  if (n == 0) return out;

  Eigen::ComplexEigenSolver<ColMajor> solver;
  solver.setMaxIterations(static_cast<Eigen::Index>(options.max_sweeps_per_row) * n);
  solver.compute(ColMajor(m), options.compute_vectors);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::kNonConvergence, "shifted QR exceeded its sweep budget");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto& values = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return modulus_order(values(a), values(b)); });

  out.values.reserve(order.size());
  for (Eigen::Index k : order) out.values.push_back(values(k));
  if (options.compute_vectors) {
    out.vectors.resize(n, n);
    const auto& vectors = solver.eigenvectors();
    for (Eigen::Index c = 0; c < n; ++c) out.vectors.col(c) = vectors.col(order[static_cast<std::size_t>(c)]);
  }
  return out;
}

double max_relative_residual(const ComplexMatrix& m, const GeneralEigen& eig) {
  const double fro = m.norm();
  double worst = 0.0;
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    const ComplexVector v = eig.vectors.col(static_cast<Eigen::Index>(k));
    const double scale = fro * v.norm();
    if (scale == 0.0) continue;
    worst = std::max(worst, (m * v - eig.values[k] * v).norm() / scale);
  }
  return worst;
}

HermitianEigen eig_hermitian(const ComplexMatrix& m, double hermitian_tolerance) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::kDimensionMismatch, "eig_hermitian needs a square matrix");
  const double herm = hermiticity_error(m);
  if (!(herm <= hermitian_tolerance))
    throw Error(ErrorCode::kNotHermitian, "max |m - m^dag| = " + describe(herm));
  const ColMajor sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ColMajor> solver(sym);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::kNonConvergence, "Hermitian eigensolver failed");
  HermitianEigen out;
  out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  out.vectors = solver.eigenvectors();
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  const std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  if (dims.empty() || m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != total)
    throw Error(ErrorCode::kDimensionMismatch, "subsystem dimensions do not multiply to the matrix size");

  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end() ||
      (!kept.empty() && kept.back() >= dims.size()))
    throw Error(ErrorCode::kDimensionMismatch, "keep indices must be distinct subsystem indices");

  std::vector<std::size_t> strides(dims.size());
  std::size_t stride = 1;
  for (std::size_t k = dims.size(); k-- > 0;) {
    strides[k] = stride;
    stride *= dims[k];
  }

  // Offsets into the full index for every multi-index over a subsystem subset.
  auto offsets_for = [&](const std::vector<std::size_t>& subset) {
    std::vector<std::size_t> offsets{0};
    for (std::size_t s : subset) {
      std::vector<std::size_t> next;
      next.reserve(offsets.size() * dims[s]);
      for (std::size_t base : offsets)
        for (std::size_t digit = 0; digit < dims[s]; ++digit) next.push_back(base + digit * strides[s]);
      offsets = std::move(next);
    }
    return offsets;
  };

  std::vector<std::size_t> traced;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (!std::binary_search(kept.begin(), kept.end(), k)) traced.push_back(k);

  const auto keep_off = offsets_for(kept);
  const auto trace_off = offsets_for(traced);
  const auto n_out = static_cast<Eigen::Index>(keep_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(n_out, n_out);
  for (Eigen::Index a = 0; a < n_out; ++a)
    for (Eigen::Index b = 0; b < n_out; ++b) {
      Complex acc = 0.0;
      for (std::size_t t : trace_off)
        acc += m(static_cast<Eigen::Index>(keep_off[static_cast<std::size_t>(a)] + t),
                 static_cast<Eigen::Index>(keep_off[static_cast<std::size_t>(b)] + t));
      out(a, b) = acc;
    }
  return out;
}

ComplexMatrix inv_sqrt_psd(const ComplexMatrix& m) {
  const HermitianEigen eig = eig_hermitian(m);
  const double largest = eig.values.back();
  const double smallest = eig.values.front();
  if (!(largest > 0.0) || !(smallest > 1e-12 * largest))
    throw Error(ErrorCode::kSingular, "matrix is not positive definite (min eigenvalue " + describe(smallest) + ")");
  Eigen::VectorXd scale(static_cast<Eigen::Index>(eig.values.size()));
  for (std::size_t k = 0; k < eig.values.size(); ++k)
    scale(static_cast<Eigen::Index>(k)) = 1.0 / std::sqrt(eig.values[k]);
  return eig.vectors * scale.asDiagonal() * eig.vectors.adjoint();
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const ComplexMatrix diff = a - b;
  const HermitianEigen eig = eig_hermitian(0.5 * (diff + diff.adjoint()), std::numeric_limits<double>::infinity());
  double sum = 0.0;
  for (double v : eig.values) sum += std::abs(v);
  return 0.5 * sum;
}

}  // namespace rmtbench
