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

#include "rmtbench/channel.hpp"

#include <cmath>
#include <string>

#include "rmtbench/errors.hpp"
#include "rmtbench/json_io.hpp"

namespace rmtbench {
namespace {

constexpr int kGinibreAttempts = 3;

std::size_t qubit_dim(std::size_t n_qubits) {
  if (n_qubits == 0 || n_qubits > 12) throw Error(ErrorCode::kInvalidParams, "n_qubits must be in [1, 12]");
  return std::size_t{1} << n_qubits;
}

void check_rank(std::size_t rank, std::size_t dim) {
  if (rank < 1 || rank > dim * dim)
    throw Error(ErrorCode::kInvalidParams,
                "Kraus rank must be in [1, " + std::to_string(dim * dim) + "], got " + std::to_string(rank));
}

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus_ops, double tp_tolerance)
    : dim_(0), ops_(std::move(kraus_ops)) {
  if (ops_.empty()) throw Error(ErrorCode::kInvalidParams, "a channel needs at least one Kraus operator");
  dim_ = static_cast<std::size_t>(ops_.front().rows());
  for (const auto& k : ops_) {
    if (static_cast<std::size_t>(k.rows()) != dim_ || static_cast<std::size_t>(k.cols()) != dim_)
      throw Error(ErrorCode::kDimensionMismatch, "Kraus operators must all be square of the same size");
    if (!all_finite(k)) throw Error(ErrorCode::kInvalidParams, "Kraus operator has non-finite entries");
  }
  check_rank(ops_.size(), dim_);
  const double err = trace_preservation_error();
  if (!(err <= tp_tolerance))
    throw Error(ErrorCode::kNotTP, "||sum K^dag K - I||_max = " + std::to_string(err));
}

KrausChannel KrausChannel::identity(std::size_t dim) { return KrausChannel({rmtbench::identity(dim)}); }

KrausChannel KrausChannel::unitary(const UnitaryMatrix& u) { return KrausChannel({u.matrix()}); }

KrausChannel KrausChannel::completely_depolarizing(std::size_t dim) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(dim * dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  const auto n = static_cast<Eigen::Index>(dim);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      ComplexMatrix k = ComplexMatrix::Zero(n, n);
      k(i, j) = scale;
      ops.push_back(std::move(k));
    }
  return KrausChannel(std::move(ops));
}

double KrausChannel::trace_preservation_error() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (const auto& k : ops_) acc.noalias() += k.adjoint() * k;
  return (acc - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

ComplexMatrix apply_linear(const KrausChannel& channel, const ComplexMatrix& x) {
  if (static_cast<std::size_t>(x.rows()) != channel.dim() || x.rows() != x.cols())
    throw Error(ErrorCode::kDimensionMismatch, "operator dimension does not match the channel");
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (const auto& k : channel.kraus_ops()) out.noalias() += k * x * k.adjoint();
  return out;
}

DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho) {
  return DensityMatrix(apply_linear(channel, rho.matrix()));
}

DensityMatrix iterate(const KrausChannel& channel, const DensityMatrix& rho, std::size_t steps) {
  if (rho.dim() != channel.dim())
    throw Error(ErrorCode::kDimensionMismatch, "state dimension does not match the channel");
  ComplexMatrix x = rho.matrix();
  for (std::size_t t = 0; t < steps; ++t) x = apply_linear(channel, x);
  return DensityMatrix(std::move(x));
}

KrausChannel random_ginibre_kraus(std::size_t n_qubits, std::size_t rank, RngStream& rng) {
  const std::size_t dim = qubit_dim(n_qubits);
  check_rank(rank, dim);
  for (int attempt = 0; attempt < kGinibreAttempts; ++attempt) {
    std::vector<ComplexMatrix> g;
    g.reserve(rank);
    const auto n = static_cast<Eigen::Index>(dim);
    ComplexMatrix s = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < rank; ++i) {
      g.push_back(sample_ginibre(dim, dim, rng));
      s.noalias() += g.back().adjoint() * g.back();
    }
    ComplexMatrix s_inv_sqrt;
    try {
      s_inv_sqrt = inv_sqrt_psd(s);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kSingular) continue;
      throw;
    }
    for (auto& gi : g) gi = gi * s_inv_sqrt;
    return KrausChannel(std::move(g));
  }
  throw Error(ErrorCode::kSingular, "normalisation matrix S was singular on every attempt");
}

KrausChannel random_stinespring(std::size_t n_qubits, std::size_t rank, RngStream& rng) {
  const std::size_t dim = qubit_dim(n_qubits);
  check_rank(rank, dim);
  const UnitaryMatrix u = sample_haar_unitary(dim * rank, rng);
  const auto n = static_cast<Eigen::Index>(dim);
  const auto r = static_cast<Eigen::Index>(rank);
  std::vector<ComplexMatrix> ops;
  ops.reserve(rank);
  for (Eigen::Index e = 0; e < r; ++e) {
    ComplexMatrix k(n, n);
    for (Eigen::Index out = 0; out < n; ++out)
      for (Eigen::Index in = 0; in < n; ++in) k(out, in) = u.matrix()(out * r + e, in * r);
    ops.push_back(std::move(k));
  }
  return KrausChannel(std::move(ops));
}

KrausChannel random_choi_channel(std::size_t n_qubits, std::size_t rank, RngStream& rng) {
  const std::size_t dim = qubit_dim(n_qubits);
  check_rank(rank, dim);
  const ComplexMatrix g = sample_ginibre(dim * dim, rank, rng);
  const ComplexMatrix c = g * g.adjoint();
  const std::size_t dims[] = {dim, dim};
  const std::size_t keep_input[] = {0};
  const ComplexMatrix y = partial_trace(c, dims, keep_input);
  const ComplexMatrix a = kron(inv_sqrt_psd(y), rmtbench::identity(dim));
  ChoiMatrix choi{a * c * a.adjoint(), dim};
  return from_choi(choi);
}

Superoperator to_superoperator(const KrausChannel& channel) {
  const auto n2 = static_cast<Eigen::Index>(channel.dim() * channel.dim());
  Superoperator s{ComplexMatrix::Zero(n2, n2), channel.dim()};
  for (const auto& k : channel.kraus_ops()) s.matrix += kron(k.conjugate(), k);
  return s;
}

ChoiMatrix to_choi(const KrausChannel& channel) {
  const auto n = static_cast<Eigen::Index>(channel.dim());
  ChoiMatrix choi{ComplexMatrix::Zero(n * n, n * n), channel.dim()};
  ComplexVector v(n * n);
  for (const auto& k : channel.kraus_ops()) {
    // |K>> = sum_i |i> (x) K|i>
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index a = 0; a < n; ++a) v(i * n + a) = k(a, i);
    choi.matrix.noalias() += v * v.adjoint();
  }
  return choi;
}

KrausChannel from_choi(const ChoiMatrix& choi, const FromChoiOptions& options) {
  const std::size_t dim = choi.system_dim;
  const auto n = static_cast<Eigen::Index>(dim);
  if (choi.matrix.rows() != n * n || choi.matrix.cols() != n * n)
    throw Error(ErrorCode::kDimensionMismatch, "Choi matrix must be N^2 x N^2");

  const HermitianEigen eig = eig_hermitian(choi.matrix, 1e-8);
  if (eig.values.front() < -options.cp_tolerance)
    throw Error(ErrorCode::kNotCP, "Choi matrix has eigenvalue " + std::to_string(eig.values.front()));

  const std::size_t dims[] = {dim, dim};
  const std::size_t keep_input[] = {0};
  const double tp_err =
      (partial_trace(choi.matrix, dims, keep_input) - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (tp_err > options.tp_tolerance)
    throw Error(ErrorCode::kNotTP, "Tr_out(Choi) deviates from I by " + std::to_string(tp_err));

  std::vector<ComplexMatrix> ops;
  // Descending weight so the dominant Kraus operator comes first.
  for (std::size_t k = eig.values.size(); k-- > 0;) {
    const double lambda = eig.values[k];
    if (lambda <= options.kraus_cutoff) break;
    const double scale = std::sqrt(lambda);
    ComplexMatrix op(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index a = 0; a < n; ++a) op(a, i) = scale * eig.vectors(i * n + a, static_cast<Eigen::Index>(k));
    ops.push_back(std::move(op));
  }
  return KrausChannel(std::move(ops), std::max(options.tp_tolerance, kTracePreservationTolerance));
}

KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner) {
  if (outer.dim() != inner.dim()) throw Error(ErrorCode::kDimensionMismatch, "cannot compose channels of different dimension");
  std::vector<ComplexMatrix> ops;
  ops.reserve(outer.rank() * inner.rank());
  for (const auto& a : outer.kraus_ops())
    for (const auto& b : inner.kraus_ops()) ops.push_back(a * b);
  if (ops.size() <= outer.dim() * outer.dim()) return KrausChannel(std::move(ops), 1e-9);

  const auto n = static_cast<Eigen::Index>(outer.dim());
  ChoiMatrix choi{ComplexMatrix::Zero(n * n, n * n), outer.dim()};
  ComplexVector v(n * n);
  for (const auto& k : ops) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index a = 0; a < n; ++a) v(i * n + a) = k(a, i);
    choi.matrix.noalias() += v * v.adjoint();
  }
  return from_choi(choi);
}

nlohmann::json channel_to_json(const KrausChannel& channel) {
  nlohmann::json doc;
  doc["format"] = "rmtbench.channel/1";
  doc["dim"] = channel.dim();
  doc["rank"] = channel.rank();
  auto& ops = doc["kraus"] = nlohmann::json::array();
  for (const auto& k : channel.kraus_ops()) ops.push_back(matrix_entries_to_json(k));
  return doc;
}

KrausChannel channel_from_json(const nlohmann::json& doc) {
  try {
    const auto dim = require_field(doc, "dim").get<std::size_t>();
    const auto rank = require_field(doc, "rank").get<std::size_t>();
    const auto& ops_json = require_field(doc, "kraus");
    if (!ops_json.is_array() || ops_json.size() != rank)
      throw Error(ErrorCode::kMalformedInput, "'kraus' must hold 'rank' operators");
    std::vector<ComplexMatrix> ops;
    for (const auto& entries : ops_json) ops.push_back(matrix_entries_from_json(entries, dim, dim));
    return KrausChannel(std::move(ops), 1e-9);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, e.what());
  }
}

}  // namespace rmtbench
