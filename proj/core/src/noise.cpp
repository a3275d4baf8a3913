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

#include "rmtbench/noise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

#include "rmtbench/errors.hpp"
#include "rmtbench/json_io.hpp"

namespace rmtbench {
namespace {

using Index = Eigen::Index;

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kOutOfRange, std::string(what) + " must lie in [0, 1]");
}

void check_relaxation(double t1_us, double t2_us, double duration_us) {
  if (!(t1_us > 0.0) || !(t2_us > 0.0)) throw Error(ErrorCode::kInvalidParams, "T1 and T2 must be positive");
  if (!(duration_us >= 0.0)) throw Error(ErrorCode::kInvalidParams, "duration must be non-negative");
  if (t2_us > 2.0 * t1_us * (1.0 + 1e-12))
    throw Error(ErrorCode::kInvalidParams,
                "T2 = " + std::to_string(t2_us) + " exceeds 2*T1 = " + std::to_string(2.0 * t1_us));
}

std::size_t register_qubits(std::size_t dim) {
  if (dim == 0 || !std::has_single_bit(dim))
    throw Error(ErrorCode::kDimensionMismatch, "register dimension must be a power of two");
  return static_cast<std::size_t>(std::countr_zero(dim));
}

std::size_t qubit_mask(std::span<const std::size_t> qubits, std::size_t n_qubits) {
  std::size_t mask = 0;
  for (std::size_t q : qubits) {
    if (q >= n_qubits) throw Error(ErrorCode::kDimensionMismatch, "qubit index " + std::to_string(q) + " out of range");
    mask |= std::size_t{1} << q;
  }
  return mask;
}

std::optional<double> optional_number(const nlohmann::json& row, const char* key) {
  auto it = row.find(key);
  if (it == row.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw Error(ErrorCode::kMalformedInput, std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

}  // namespace

ReadoutError QubitNoise::readout_error() const noexcept {
  return {p1_given_0.value_or(readout), p0_given_1.value_or(readout)};
}

double QubitNoise::effective_t2_us() const {
  if (t2_us) return *t2_us;
  return t1_us ? 2.0 * *t1_us : std::numeric_limits<double>::infinity();
}

void NoiseModel::validate() const {
  check_probability(depolarizing, "depolarizing weight");
  if (!(reset_error >= 0.0 && reset_error <= 0.5)) throw Error(ErrorCode::kOutOfRange, "reset error must lie in [0, 0.5]");
  if (!(gate_duration_us >= 0.0) || !(measurement_duration_us >= 0.0))
    throw Error(ErrorCode::kInvalidParams, "durations must be non-negative");
  for (std::size_t q = 0; q < qubits.size(); ++q) {
    const auto& row = qubits[q];
    check_probability(row.readout, "readout error");
    if (row.p1_given_0) check_probability(*row.p1_given_0, "p(1|0)");
    if (row.p0_given_1) check_probability(*row.p0_given_1, "p(0|1)");
    if (row.t2_us && !row.t1_us) throw Error(ErrorCode::kInvalidParams, "qubit " + std::to_string(q) + ": T2 given without T1");
    if (row.t1_us) check_relaxation(*row.t1_us, row.effective_t2_us(), 0.0);
  }
}

QubitNoise NoiseModel::qubit(std::size_t index) const { return index < qubits.size() ? qubits[index] : QubitNoise{}; }

bool NoiseModel::has_relaxation() const noexcept {
  return std::any_of(qubits.begin(), qubits.end(), [](const QubitNoise& q) { return q.has_relaxation(); });
}

std::vector<ReadoutError> NoiseModel::readout_errors(std::size_t first_qubit, std::size_t count) const {
  std::vector<ReadoutError> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = qubit(first_qubit + k).readout_error();
  return out;
}

NoiseModel noise_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kMalformedInput, "noise file must be a JSON object");
  NoiseModel noise;
  try {
    noise.depolarizing = doc.value("depolarizing", 0.0);
    noise.reset_error = doc.value("reset_error", 0.0);
    noise.gate_duration_us = doc.value("gate_duration_us", 0.0);
    noise.measurement_duration_us = doc.value("measurement_duration_us", 1.0);
    if (auto it = doc.find("qubits"); it != doc.end()) {
      if (!it->is_array()) throw Error(ErrorCode::kMalformedInput, "'qubits' must be an array");
      for (const auto& row : *it) {
        const auto index = require_field(row, "qubit").get<std::size_t>();
        if (index >= 64) throw Error(ErrorCode::kMalformedInput, "qubit index too large");
        if (noise.qubits.size() <= index) noise.qubits.resize(index + 1);
        QubitNoise& q = noise.qubits[index];
        q.t1_us = optional_number(row, "t1_us");
        q.t2_us = optional_number(row, "t2_us");
        q.readout = optional_number(row, "readout").value_or(0.0);
        q.p1_given_0 = optional_number(row, "p1_given_0");
        q.p0_given_1 = optional_number(row, "p0_given_1");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, std::string("noise file: ") + e.what());
  }
  noise.validate();
  return noise;
}

nlohmann::json noise_to_json(const NoiseModel& noise) {
  nlohmann::json doc;
  doc["format"] = "rmtbench.noise/1";
  doc["depolarizing"] = noise.depolarizing;
  doc["reset_error"] = noise.reset_error;
  doc["gate_duration_us"] = noise.gate_duration_us;
  doc["measurement_duration_us"] = noise.measurement_duration_us;
  auto& rows = doc["qubits"] = nlohmann::json::array();
  for (std::size_t k = 0; k < noise.qubits.size(); ++k) {
    const auto& q = noise.qubits[k];
    nlohmann::json row;
    row["qubit"] = k;
    if (q.t1_us) row["t1_us"] = *q.t1_us;
    if (q.t2_us) row["t2_us"] = *q.t2_us;
    row["readout"] = q.readout;
    if (q.p1_given_0) row["p1_given_0"] = *q.p1_given_0;
    if (q.p0_given_1) row["p0_given_1"] = *q.p0_given_1;
    rows.push_back(std::move(row));
  }
  return doc;
}

DensityMatrix faulty_reset_state(double p) {
  if (!(p >= 0.0 && p <= 0.5)) throw Error(ErrorCode::kOutOfRange, "reset error p must lie in [0, 0.5]");
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0 - p;
  m(1, 1) = p;
  return DensityMatrix(std::move(m));
}

DensityMatrix depolarize(const DensityMatrix& rho, double weight, std::span<const std::size_t> qubits) {
  check_probability(weight, "depolarizing weight");
  ComplexMatrix m = rho.matrix();
  kernels::depolarize(m, weight, qubits);
  return DensityMatrix(std::move(m));
}

DensityMatrix thermal_relax(const DensityMatrix& rho, double t1_us, double t2_us, double duration_us,
                            std::size_t qubit) {
  ComplexMatrix m = rho.matrix();
  kernels::thermal_relax(m, t1_us, t2_us, duration_us, qubit);
  return DensityMatrix(std::move(m));
}

Histogram sample_shots(const DensityMatrix& rho, std::uint64_t shots, std::span<const ReadoutError> readout,
                       RngStream& rng) {
  if (shots == 0) throw Error(ErrorCode::kInvalidParams, "shots must be at least 1");
  const std::size_t n_qubits = register_qubits(rho.dim());
  std::vector<double> cumulative(rho.dim());
  double running = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    running += std::max(0.0, rho.matrix()(static_cast<Index>(i), static_cast<Index>(i)).real());
    cumulative[i] = running;
  }
  for (const auto& e : readout) {
    check_probability(e.p1_given_0, "p(1|0)");
    check_probability(e.p0_given_1, "p(0|1)");
  }

  std::vector<std::uint64_t> counts(rho.dim(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * running;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t outcome = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                                            static_cast<std::ptrdiff_t>(rho.dim()) - 1));
    for (std::size_t q = 0; q < n_qubits && q < readout.size(); ++q) {
      const bool one = (outcome >> q) & 1u;
      const double flip = one ? readout[q].p0_given_1 : readout[q].p1_given_0;
      if (flip > 0.0 && rng.uniform() < flip) outcome ^= std::size_t{1} << q;
    }
    ++counts[outcome];
  }
  Histogram h;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] > 0) h[bitstring(i, n_qubits)] = counts[i];
  return h;
}

namespace kernels {

std::size_t qubit_count(const ComplexMatrix& rho) { return register_qubits(static_cast<std::size_t>(rho.rows())); }

void apply_two_qubit(ComplexMatrix& rho, const ComplexMatrix& u, std::size_t q0, std::size_t q1) {
  const std::size_t n = qubit_count(rho);
  if (q0 == q1 || q0 >= n || q1 >= n) throw Error(ErrorCode::kDimensionMismatch, "invalid two-qubit gate targets");
  if (u.rows() != 4 || u.cols() != 4) throw Error(ErrorCode::kDimensionMismatch, "two-qubit gate must be 4x4");
  const std::size_t b0 = std::size_t{1} << q0;
  const std::size_t b1 = std::size_t{1} << q1;
  const std::size_t dim = static_cast<std::size_t>(rho.rows());
  Index idx[4];
  Complex tmp[4];
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & (b0 | b1)) continue;
    idx[0] = static_cast<Index>(base);
    idx[1] = static_cast<Index>(base | b0);
    idx[2] = static_cast<Index>(base | b1);
    idx[3] = static_cast<Index>(base | b0 | b1);
    // rows: rho <- U rho
    for (Index c = 0; c < rho.cols(); ++c) {
      for (int k = 0; k < 4; ++k) {
        tmp[k] = 0.0;
        for (int l = 0; l < 4; ++l) tmp[k] += u(k, l) * rho(idx[l], c);
      }
      for (int k = 0; k < 4; ++k) rho(idx[k], c) = tmp[k];
    }
  }
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & (b0 | b1)) continue;
    idx[0] = static_cast<Index>(base);
    idx[1] = static_cast<Index>(base | b0);
    idx[2] = static_cast<Index>(base | b1);
    idx[3] = static_cast<Index>(base | b0 | b1);
    // columns: rho <- rho U^dag
    for (Index r = 0; r < rho.rows(); ++r) {
      for (int k = 0; k < 4; ++k) {
        tmp[k] = 0.0;
        for (int l = 0; l < 4; ++l) tmp[k] += rho(r, idx[l]) * std::conj(u(k, l));
      }
      for (int k = 0; k < 4; ++k) rho(r, idx[k]) = tmp[k];
    }
  }
}

void depolarize(ComplexMatrix& rho, double weight, std::span<const std::size_t> qubits) {
  check_probability(weight, "depolarizing weight");
  if (weight == 0.0 || qubits.empty()) return;
  const std::size_t n = qubit_count(rho);
  const std::size_t mask = qubit_mask(qubits, n);
  const double sub_dim = static_cast<double>(std::size_t{1} << std::popcount(mask));
  const std::size_t dim = static_cast<std::size_t>(rho.rows());
  ComplexMatrix out = (1.0 - weight) * rho;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      if ((i & mask) != (j & mask)) continue;
      const std::size_t ri = i & ~mask;
      const std::size_t rj = j & ~mask;
      Complex acc = 0.0;
      std::size_t k = 0;
      do {
        acc += rho(static_cast<Index>(ri | k), static_cast<Index>(rj | k));
        k = (k - mask) & mask;
      } while (k != 0);
      out(static_cast<Index>(i), static_cast<Index>(j)) += weight * acc / sub_dim;
    }
  rho = std::move(out);
}

void thermal_relax(ComplexMatrix& rho, double t1_us, double t2_us, double duration_us, std::size_t qubit) {
  check_relaxation(t1_us, t2_us, duration_us);
  const std::size_t n = qubit_count(rho);
  if (qubit >= n) throw Error(ErrorCode::kDimensionMismatch, "qubit index out of range");
  if (duration_us == 0.0) return;
  const double gamma = -std::expm1(-duration_us / t1_us);
  const double coherence = std::exp(-duration_us / t2_us);
  const std::size_t bit = std::size_t{1} << qubit;
  const std::size_t dim = static_cast<std::size_t>(rho.rows());
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      if (j & bit) continue;
      const auto i0 = static_cast<Index>(i);
      const auto j0 = static_cast<Index>(j);
      const auto i1 = static_cast<Index>(i | bit);
      const auto j1 = static_cast<Index>(j | bit);
      const Complex excited = rho(i1, j1);
      rho(i0, j0) += gamma * excited;
      rho(i1, j1) = (1.0 - gamma) * excited;
      rho(i0, j1) *= coherence;
      rho(i1, j0) *= coherence;
    }
  }
}

void reset_qubit(ComplexMatrix& rho, std::size_t qubit, const ComplexMatrix& replacement) {
  const std::size_t n = qubit_count(rho);
  if (qubit >= n) throw Error(ErrorCode::kDimensionMismatch, "qubit index out of range");
  if (replacement.rows() != 2 || replacement.cols() != 2)
    throw Error(ErrorCode::kDimensionMismatch, "replacement state must be 2x2");
  const std::size_t bit = std::size_t{1} << qubit;
  const std::size_t dim = static_cast<std::size_t>(rho.rows());
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      if (j & bit) continue;
      const auto i0 = static_cast<Index>(i);
      const auto j0 = static_cast<Index>(j);
      const auto i1 = static_cast<Index>(i | bit);
      const auto j1 = static_cast<Index>(j | bit);
      const Complex reduced = rho(i0, j0) + rho(i1, j1);
      rho(i0, j0) = replacement(0, 0) * reduced;
      rho(i0, j1) = replacement(0, 1) * reduced;
      rho(i1, j0) = replacement(1, 0) * reduced;
      rho(i1, j1) = replacement(1, 1) * reduced;
    }
  }
}

double project_qubit(ComplexMatrix& rho, std::size_t qubit, int outcome) {
  const std::size_t n = qubit_count(rho);
  if (qubit >= n) throw Error(ErrorCode::kDimensionMismatch, "qubit index out of range");
  const std::size_t bit = std::size_t{1} << qubit;
  const std::size_t keep = outcome ? bit : 0;
  const std::size_t dim = static_cast<std::size_t>(rho.rows());
  double prob = 0.0;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const auto ii = static_cast<Index>(i);
      const auto jj = static_cast<Index>(j);
      if ((i & bit) != keep || (j & bit) != keep) {
        rho(ii, jj) = 0.0;
      } else if (i == j) {
        prob += rho(ii, jj).real();
      }
    }
  return prob;
}

ComplexMatrix trace_out_low_qubits(const ComplexMatrix& rho, std::size_t low_qubits) {
  const std::size_t n = qubit_count(rho);
  if (low_qubits > n) throw Error(ErrorCode::kDimensionMismatch, "cannot trace out more qubits than the register has");
  const auto block = static_cast<Index>(std::size_t{1} << low_qubits);
  const Index out_dim = rho.rows() / block;
  ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
  for (Index s = 0; s < out_dim; ++s)
    for (Index t = 0; t < out_dim; ++t) {
      Complex acc = 0.0;
      for (Index a = 0; a < block; ++a) acc += rho(s * block + a, t * block + a);
      out(s, t) = acc;
    }
  return out;
}

}  // namespace kernels

}  // namespace rmtbench
