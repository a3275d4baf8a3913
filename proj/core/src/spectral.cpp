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

#include "rmtbench/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "rmtbench/errors.hpp"
#include "text_util.hpp"

namespace rmtbench {
namespace {

std::size_t nearest_to_one(const std::vector<Complex>& values) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k)
    if (std::abs(values[k] - 1.0) < std::abs(values[best] - 1.0)) best = k;
  return best;
}

void require_fixed_point(const Complex& leading, const SpectralTolerances& tol) {
  const double dist = std::abs(leading - 1.0);
  if (!(dist <= tol.fixed_point_assert))
    throw Error(ErrorCode::kNoFixedPoint,
                "no eigenvalue within " + std::to_string(tol.fixed_point_assert) + " of 1 (nearest at distance " +
                    std::to_string(dist) + ")");
}

}  // namespace

std::vector<Complex> ChannelSpectrum::subleading() const {
  std::vector<Complex> rest;
  rest.reserve(eigenvalues.empty() ? 0 : eigenvalues.size() - 1);
  bool skipped = false;
  for (const auto& z : eigenvalues) {
    if (!skipped && z == leading) {
      skipped = true;
      continue;
    }
    rest.push_back(z);
  }
  return rest;
}

ChannelSpectrum analyze_spectrum(const KrausChannel& channel, const SpectralTolerances& tol) {
  const Superoperator s = to_superoperator(channel);
  EigOptions options;
  options.compute_vectors = false;
  ChannelSpectrum spectrum;
  spectrum.eigenvalues = eig_general(s.matrix, options).values;
  spectrum.rank = channel.rank();
  spectrum.girko_radius = 1.0 / std::sqrt(static_cast<double>(channel.rank()));

  const std::size_t lead = nearest_to_one(spectrum.eigenvalues);
  spectrum.leading = spectrum.eigenvalues[lead];
  require_fixed_point(spectrum.leading, tol);

  double second = 0.0;
  for (std::size_t k = 0; k < spectrum.eigenvalues.size(); ++k)
    if (k != lead) second = std::max(second, std::abs(spectrum.eigenvalues[k]));
  spectrum.gap = std::clamp(1.0 - second, 0.0, 1.0);
  return spectrum;
}

SteadyStateDecomposition steady_state(const KrausChannel& channel, const SpectralTolerances& tol) {
  const std::size_t dim = channel.dim();
  const Superoperator s = to_superoperator(channel);
  const GeneralEigen eig = eig_general(s.matrix);

  const auto on_circle = std::count_if(eig.values.begin(), eig.values.end(), [&](const Complex& z) {
    return std::abs(z) >= 1.0 - tol.fixed_point_detect;
  });
  if (on_circle >= 2)
    throw Error(ErrorCode::kDegenerateFixedSpace,
                std::to_string(on_circle) + " eigenvalues on the unit circle; steady state is not unique");

  const std::size_t lead = nearest_to_one(eig.values);
  require_fixed_point(eig.values[lead], tol);

  ComplexMatrix x = unvec(eig.vectors.col(static_cast<Eigen::Index>(lead)), dim, dim);
  const Complex tr = x.trace();
  if (!(std::abs(tr) > 0.0)) throw Error(ErrorCode::kInvalidState, "fixed-point eigenvector is traceless");
  x *= std::conj(tr) / std::abs(tr);

  const double asym = max_abs(x - x.adjoint()) / std::max(max_abs(x), 1e-300);
  if (asym > tol.hermitize_check)
    throw Error(ErrorCode::kInvalidState, "fixed-point eigenvector is not Hermitian up to phase (" +
                                              std::to_string(asym) + ")");
  ComplexMatrix rho = 0.5 * (x + x.adjoint());
  rho /= rho.trace().real();

  const HermitianEigen decomposition = eig_hermitian(rho);
  const std::size_t n = decomposition.values.size();
  std::vector<double> values(n);
  ComplexMatrix vectors(decomposition.vectors.rows(), decomposition.vectors.cols());
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = decomposition.values[n - 1 - k];
    vectors.col(static_cast<Eigen::Index>(k)) = decomposition.vectors.col(static_cast<Eigen::Index>(n - 1 - k));
  }
  return SteadyStateDecomposition{DensityMatrix(std::move(rho)), std::move(values), std::move(vectors)};
}

std::size_t convergence_iterations(std::size_t rank, double epsilon) {
  if (rank == 1) throw Error(ErrorCode::kRankOne, "rank-1 (unitary) channels never converge");
  if (rank == 0) throw Error(ErrorCode::kInvalidParams, "rank must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorCode::kInvalidParams, "epsilon must lie in (0, 1)");
  const double gamma = 1.0 / std::sqrt(static_cast<double>(rank));
  const double ratio = std::log(epsilon) / std::log(gamma);
  return static_cast<std::size_t>(std::max(1.0, std::ceil(ratio - 1e-12)));
}

double girko_fraction(std::span<const ChannelSpectrum> spectra, double slack) {
  if (spectra.empty()) throw Error(ErrorCode::kInvalidParams, "girko_fraction needs at least one spectrum");
  std::size_t inside = 0;
  std::size_t total = 0;
  for (const auto& spectrum : spectra) {
    for (const auto& z : spectrum.subleading()) {
      ++total;
      if (std::abs(z) <= spectrum.girko_radius + slack) ++inside;
    }
  }
  return total == 0 ? 1.0 : static_cast<double>(inside) / static_cast<double>(total);
}

double disk_violation(const ChannelSpectrum& spectrum) {
  const auto rest = spectrum.subleading();
  if (rest.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& z : rest) sum += std::max(0.0, std::abs(z) - spectrum.girko_radius);
  return sum / static_cast<double>(rest.size());
}

void write_spectrum_csv(std::ostream& out, std::span<const ChannelSpectrum> spectra) {
  out << "channel,re,im\n";
  for (std::size_t c = 0; c < spectra.size(); ++c)
    for (const auto& z : spectra[c].eigenvalues)
      out << c << ',' << detail::format_double(z.real()) << ',' << detail::format_double(z.imag()) << '\n';
}

}  // namespace rmtbench
