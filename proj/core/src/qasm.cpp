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

#include "rmtbench/qasm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "rmtbench/errors.hpp"
#include "text_util.hpp"

namespace rmtbench {
namespace {

using Index = Eigen::Index;
using std::numbers::pi;
constexpr double kDecompositionTolerance = 1e-8;
const Complex kI(0.0, 1.0);

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

ComplexMatrix rz(double t) { return mat2(std::exp(-kI * (t / 2)), 0.0, 0.0, std::exp(kI * (t / 2))); }
ComplexMatrix ry(double t) { return mat2(std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2)); }

ComplexMatrix magic_basis() {
  ComplexMatrix b(4, 4);
  b << 1, 0, 0, kI,  //
      0, kI, 1, 0,   //
      0, kI, -1, 0,  //
      1, 0, 0, -kI;
  return b / std::sqrt(2.0);
}

// Local two-qubit basis index is b(q0) + 2 b(q1).
ComplexMatrix cx_local(std::size_t control) {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  const std::size_t cbit = control == 0 ? 1 : 2;
  const std::size_t tbit = control == 0 ? 2 : 1;
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t j = (i & cbit) ? (i ^ tbit) : i;
    m(static_cast<Index>(j), static_cast<Index>(i)) = 1.0;
  }
  return m;
}

ComplexMatrix on_local(const ComplexMatrix& v, std::size_t target) {
  return target == 0 ? kron(identity(2), v) : kron(v, identity(2));
}

// Splits a 4x4 tensor product into kron(a, b) with det a = 1.
std::pair<ComplexMatrix, ComplexMatrix> split_tensor(const ComplexMatrix& l) {
  ComplexMatrix r(4, 4);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j)
      for (Index k = 0; k < 2; ++k)
        for (Index m = 0; m < 2; ++m) r(i * 2 + j, k * 2 + m) = l(i * 2 + k, j * 2 + m);
  Index p = 0, q = 0;
  r.cwiseAbs().maxCoeff(&p, &q);
  ComplexMatrix a(2, 2), b(2, 2);
  for (Index x = 0; x < 4; ++x) {
    a(x / 2, x % 2) = r(x, q);
    b(x / 2, x % 2) = r(p, x) / r(p, q);
  }
  const Complex s = std::sqrt(a.determinant());
  return {a / s, b * s};
}

BasisGate u_on(const ComplexMatrix& v, std::size_t target) {
  const auto angles = u_gate_angles(v);
  return BasisGate{BasisGate::Kind::kU, target, 0, angles[0], angles[1], angles[2]};
}

BasisGate cx(std::size_t control, std::size_t target) {
  return BasisGate{BasisGate::Kind::kCX, target, control, 0.0, 0.0, 0.0};
}

// Real orthogonal P (det +1) diagonalising the complex symmetric unitary M.
Eigen::Matrix4d simultaneous_diagonalizer(const ComplexMatrix& m) {
  const Eigen::Matrix4d re = m.real();
  const Eigen::Matrix4d im = m.imag();
  for (double mix : {0.0, 1.0, 0.5772156649, 2.7182818285, 0.1234567, 3.3}) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(re + mix * im);
    Eigen::Matrix4d p = solver.eigenvectors();
    const ComplexMatrix d = p.transpose().cast<Complex>() * m * p.cast<Complex>();
    const double off = (d - ComplexMatrix(d.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
    if (off < 1e-10) {
      if (p.determinant() < 0) p.col(0) = -p.col(0);
      return p;
    }
  }
  throw Error(ErrorCode::kDecompositionFailure, "could not diagonalise the magic-basis Gram matrix");
}

std::string angle(double x) {
  // Avoid "-0" in the emitted text.
  return detail::format_double(x == 0.0 ? 0.0 : x);
}

void emit(std::ostringstream& out, const BasisGate& g) {
  if (g.kind == BasisGate::Kind::kCX) {
    out << "cx q[" << g.control << "], q[" << g.target << "];\n";
  } else {
    out << "U(" << angle(g.theta) << ", " << angle(g.phi) << ", " << angle(g.lambda) << ") q[" << g.target << "];\n";
  }
}

}  // namespace

ComplexMatrix u_gate_matrix(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  return mat2(c, -std::exp(kI * lambda) * s, std::exp(kI * phi) * s, std::exp(kI * (phi + lambda)) * c);
}

std::array<double, 3> u_gate_angles(const ComplexMatrix& v) {
  if (v.rows() != 2 || v.cols() != 2) throw Error(ErrorCode::kDimensionMismatch, "U gate must be 2x2");
  const double theta = 2.0 * std::atan2(std::abs(v(1, 0)), std::abs(v(0, 0)));
  if (std::abs(v(1, 0)) < 1e-12) return {theta, 0.0, std::arg(v(1, 1)) - std::arg(v(0, 0))};
  if (std::abs(v(0, 0)) < 1e-12) return {theta, 0.0, std::arg(-v(0, 1)) - std::arg(v(1, 0))};
  const double alpha = std::arg(v(0, 0));
  return {theta, std::arg(v(1, 0)) - alpha, std::arg(-v(0, 1)) - alpha};
}

double phase_invariant_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorCode::kDimensionMismatch, "shape mismatch");
  Complex overlap = (a.adjoint() * b).trace();
  if (std::abs(overlap) < 1e-12) {
    Index i = 0, j = 0;
    a.cwiseAbs().maxCoeff(&i, &j);
    overlap = b(i, j) / a(i, j);
  }
  const Complex phase = overlap / std::abs(overlap);
  return (a * phase - b).cwiseAbs().maxCoeff();
}

ComplexMatrix recompose_two_qubit(const std::vector<BasisGate>& gates) {
  ComplexMatrix u = identity(4);
  for (const auto& g : gates) {
    const ComplexMatrix step = g.kind == BasisGate::Kind::kCX ? cx_local(g.control)
                                                               : on_local(u_gate_matrix(g.theta, g.phi, g.lambda), g.target);
    u = (step * u).eval();
  }
  return u;
}

std::vector<BasisGate> decompose_two_qubit(const ComplexMatrix& u_in) {
  if (u_in.rows() != 4 || u_in.cols() != 4) throw Error(ErrorCode::kDimensionMismatch, "two-qubit gate must be 4x4");
  if (!all_finite(u_in) || unitarity_error(u_in) > 1e-9)
    throw Error(ErrorCode::kDecompositionFailure, "input is not unitary");

  const ComplexMatrix u = u_in * std::pow(u_in.determinant(), -0.25);
  const ComplexMatrix b = magic_basis();
  const ComplexMatrix up = b.adjoint() * u * b;
  const ComplexMatrix m = up.transpose() * up;
  const Eigen::Matrix4d p = simultaneous_diagonalizer(m);
  const ComplexMatrix pc = p.cast<Complex>();
  const ComplexMatrix d = pc.transpose() * m * pc;

  Eigen::Vector4d theta;
  for (Index k = 0; k < 4; ++k) theta(k) = std::arg(d(k, k)) / 2.0;
  if (std::abs(std::exp(kI * theta.sum()) - 1.0) > 1e-6) theta(0) += pi;

  ComplexMatrix phases = ComplexMatrix::Zero(4, 4);
  for (Index k = 0; k < 4; ++k) phases(k, k) = std::exp(-kI * theta(k));
  const ComplexMatrix l1 = b * (up * pc * phases) * b.adjoint();
  const ComplexMatrix l2 = b * pc.transpose() * b.adjoint();

  // theta = a dXX + b dYY + c dZZ + phi in the magic basis.
  Eigen::Matrix4d basis;
  basis << 1, -1, 1, 1,  //
      1, 1, -1, 1,       //
      -1, -1, -1, 1,     //
      -1, 1, 1, 1;
  const Eigen::Vector4d coeff = basis.partialPivLu().solve(theta);
  const double ca = coeff(0), cb = coeff(1), cc = coeff(2);

  const auto [a1, a0] = split_tensor(l1);
  const auto [c1, c0] = split_tensor(l2);

  const double t1 = pi / 2 - 2 * cc;
  const double t2 = 2 * ca - pi / 2;
  const double t3 = pi / 2 - 2 * cb;

  std::vector<BasisGate> gates{
      u_on(rz(-pi / 2) * c0, 0),
      u_on(c1, 1),
      cx(0, 1),
      u_on(rz(t1), 1),
      u_on(ry(t2), 0),
      cx(1, 0),
      u_on(ry(t3), 0),
      cx(0, 1),
      u_on(a1 * rz(pi / 2), 1),
      u_on(a0, 0),
  };
  const double err = phase_invariant_distance(recompose_two_qubit(gates), u_in);
  if (!(err <= kDecompositionTolerance))
    throw Error(ErrorCode::kDecompositionFailure, "recomposed gate misses the input by " + detail::format_double(err));
  return gates;
}

QasmProgram export_qasm(const CircuitIR& c, std::size_t repetitions, const QasmExportOptions& options) {
  if (repetitions < 1) throw Error(ErrorCode::kInvalidParams, "repetitions must be at least 1");
  c.validate();
  if (!options.metadata.is_object()) throw Error(ErrorCode::kInvalidParams, "metadata must be a JSON object");

  const std::size_t na = c.n_ancilla;
  const std::size_t ns = c.n_system;
  QasmProgram program;
  program.metadata = options.metadata;
  program.n_qubits = options.fresh_ancilla ? ns + na * repetitions : ns + na;
  const std::size_t n_mid = na * repetitions;
  program.n_clbits = n_mid + ns;

  // Register index of IR qubit q during repetition k.
  auto place = [&](std::size_t q, std::size_t k) -> std::size_t {
    if (!options.fresh_ancilla) return q;
    return q < na ? k * na + q : na * repetitions + (q - na);
  };

  // Each distinct gate is decomposed once; the body is replayed per block.
  std::vector<std::vector<std::vector<BasisGate>>> body;
  for (const auto& layer : c.layers) {
    auto& out = body.emplace_back();
    for (const auto& g : layer.gates) out.push_back(decompose_two_qubit(g.u.matrix()));
  }

  std::ostringstream out;
  out << "OPENQASM 3.0;\n";
  out << "include \"stdgates.inc\";\n";
  out << "// rmtbench export: n_system=" << ns << " n_ancilla=" << na << " layers=" << c.layers.size()
      << " repetitions=" << repetitions << (options.fresh_ancilla ? " ancilla=fresh" : " ancilla=reuse") << "\n";
  for (const auto& [key, value] : options.metadata.items())
    out << "// " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  out << "qubit[" << program.n_qubits << "] q;\n";
  out << "bit[" << n_mid << "] mid;\n";
  out << "bit[" << ns << "] out;\n";

  for (std::size_t k = 0; k < repetitions; ++k) {
    out << "// block " << k << "\n";
    for (std::size_t l = 0; l < c.layers.size(); ++l)
      for (std::size_t gi = 0; gi < c.layers[l].gates.size(); ++gi) {
        const Gate& g = c.layers[l].gates[gi];
        const std::size_t phys[2] = {place(g.q0, k), place(g.q1, k)};
        for (BasisGate bg : body[l][gi]) {
          bg.target = phys[bg.target];
          bg.control = phys[bg.control];
          emit(out, bg);
        }
      }
    for (const auto& op : c.terminal_ops) {
      const std::size_t q = place(op.ancilla, k);
      out << "mid[" << k * na + op.ancilla << "] = measure q[" << q << "];\n";
      if (!options.fresh_ancilla) out << "reset q[" << q << "];\n";
    }
  }
  for (std::size_t s = 0; s < ns; ++s) out << "out[" << s << "] = measure q[" << place(na + s, 0) << "];\n";
  program.source = out.str();
  return program;
}

}  // namespace rmtbench
