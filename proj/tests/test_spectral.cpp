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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rmtbench/errors.hpp"
#include "rmtbench/spectral.hpp"
#include "support/oracles.hpp"

using namespace rmtbench;

namespace {

KrausChannel amplitude_damping_full() {
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2), k1 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k1(0, 1) = 1.0;
  return KrausChannel({k0, k1});
}

}  // namespace

TEST(AnalyzeSpectrum, UnitaryChannelHasZeroGap) {
  oracle::Gen gen(1);
  const auto s = analyze_spectrum(KrausChannel::unitary(UnitaryMatrix(gen.unitary(4))));
  EXPECT_NEAR(s.gap, 0.0, 1e-10);
  EXPECT_NEAR(s.girko_radius, 1.0, 0.0);
  for (const auto& z : s.eigenvalues) EXPECT_NEAR(std::abs(z), 1.0, 1e-10);
}

TEST(AnalyzeSpectrum, CompletelyDepolarizing) {
  const auto s = analyze_spectrum(KrausChannel::completely_depolarizing(4));
  EXPECT_NEAR(std::abs(s.leading - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(s.gap, 1.0, 1e-12);
  for (std::size_t k = 1; k < s.eigenvalues.size(); ++k) EXPECT_NEAR(std::abs(s.eigenvalues[k]), 0.0, 1e-12);
}

TEST(AnalyzeSpectrum, RandomChannelInvariants) {
  RngStream rng(2, 0);
  for (std::size_t r : {2u, 3u, 5u}) {
    const auto s = analyze_spectrum(random_ginibre_kraus(2, r, rng));
    EXPECT_EQ(s.eigenvalues.size(), 16u);
    EXPECT_LE(std::abs(s.leading - 1.0), 1e-7);
    EXPECT_NEAR(s.girko_radius, 1.0 / std::sqrt(static_cast<double>(r)), 1e-15);
    EXPECT_NEAR(s.gap, 1.0 - std::abs(s.eigenvalues[1]), 1e-15);
    EXPECT_EQ(s.subleading().size(), 15u);
    for (const auto& z : s.eigenvalues) EXPECT_LE(std::abs(z), 1.0 + 1e-8);
  }
}

TEST(AnalyzeSpectrum, GirkoDiskEnsemble) {
  std::vector<ChannelSpectrum> spectra;
  for (std::size_t i = 0; i < 100; ++i) {
    RngStream rng(3, i);
    spectra.push_back(analyze_spectrum(random_ginibre_kraus(3, 2, rng)));
  }
  EXPECT_GE(girko_fraction(spectra, 0.05), 0.95);
}

TEST(GirkoFraction, TrivialEnsembles) {
  oracle::Gen gen(4);
  std::vector<ChannelSpectrum> dep{analyze_spectrum(KrausChannel::completely_depolarizing(2)),
                                   analyze_spectrum(KrausChannel::completely_depolarizing(4))};
  EXPECT_DOUBLE_EQ(girko_fraction(dep, 0.0), 1.0);
  std::vector<ChannelSpectrum> uni{analyze_spectrum(KrausChannel::unitary(UnitaryMatrix(gen.unitary(2)))),
                                   analyze_spectrum(KrausChannel::unitary(UnitaryMatrix(gen.unitary(4))))};
  EXPECT_GE(girko_fraction(uni, 1e-9), 1.0);
  EXPECT_THROW(girko_fraction({}, 0.0), Error);
}

TEST(SteadyState, CompletelyDepolarizing) {
  const auto ss = steady_state(KrausChannel::completely_depolarizing(4));
  EXPECT_LE(max_abs(ss.state.matrix() - identity(4) / 4.0), 1e-12);
  for (double v : ss.eigenvalues) EXPECT_NEAR(v, 0.25, 1e-12);
}

TEST(SteadyState, AbsorbingState) {
  const auto ss = steady_state(amplitude_damping_full());
  EXPECT_LE(max_abs(ss.state.matrix() - DensityMatrix::basis_state(2, 0).matrix()), 1e-12);
}

TEST(SteadyState, DecompositionInvariants) {
  RngStream rng(5, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const auto ch = random_ginibre_kraus(3, 2, rng);
    const auto ss = steady_state(ch);
    double sum = 0;
    for (std::size_t k = 0; k < ss.eigenvalues.size(); ++k) {
      EXPECT_GE(ss.eigenvalues[k], -1e-12);
      if (k) EXPECT_GE(ss.eigenvalues[k - 1], ss.eigenvalues[k]);
      sum += ss.eigenvalues[k];
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(ss.eigenvalues.data(), 8);
    EXPECT_LE(max_abs(ss.eigenvectors * d.cast<Complex>().asDiagonal() * ss.eigenvectors.adjoint() - ss.state.matrix()),
              1e-8);
    EXPECT_LE(max_abs(apply(ch, ss.state).matrix() - ss.state.matrix()), 1e-8);
  }
}

TEST(SteadyState, IterationConverges) {
  RngStream rng(6, 0);
  oracle::Gen gen(6);
  const auto ch = random_ginibre_kraus(3, 2, rng);
  const auto ss = steady_state(ch);
  for (int k = 0; k < 5; ++k) {
    const DensityMatrix rho0(gen.density(8, 1 + k));
    EXPECT_LE(trace_distance(iterate(ch, rho0, 60).matrix(), ss.state.matrix()), 1e-4);
  }
}

TEST(SteadyState, DegenerateFixedSpaces) {
  oracle::Gen gen(7);
  for (const auto& ch : {KrausChannel::identity(2), KrausChannel::unitary(UnitaryMatrix(gen.unitary(3)))}) {
    try {
      steady_state(ch);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kDegenerateFixedSpace);
    }
  }
  // A bit flip has eigenvalue -1: a rotating point.
  ComplexMatrix x{{0, 1}, {1, 0}};
  EXPECT_THROW(steady_state(KrausChannel::unitary(UnitaryMatrix(x))), Error);
}

TEST(ConvergenceIterations, Examples) {
  EXPECT_EQ(convergence_iterations(2, 1e-3), 20u);
  EXPECT_EQ(convergence_iterations(4, 1e-3), 10u);
  EXPECT_EQ(convergence_iterations(4, 0.5), 1u);
  try {
    convergence_iterations(1, 1e-3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRankOne);
  }
  EXPECT_THROW(convergence_iterations(2, 0.0), Error);
  EXPECT_THROW(convergence_iterations(2, 1.0), Error);
}

TEST(ConvergenceIterations, GapConsistency) {
  for (std::size_t r : {2u, 4u}) {
    for (std::size_t i = 0; i < 10; ++i) {
      RngStream rng(8, i);
      const auto ch = random_ginibre_kraus(3, r, rng);
      const double eps = 1e-3;
      const auto t = convergence_iterations(r, eps);
      const auto rho = iterate(ch, DensityMatrix::basis_state(8, 0), t);
      EXPECT_LE(trace_distance(rho.matrix(), steady_state(ch).state.matrix()), 10 * eps) << r << " " << i;
    }
  }
}

TEST(DiskViolation, ZeroForDepolarizing) {
  EXPECT_DOUBLE_EQ(disk_violation(analyze_spectrum(KrausChannel::completely_depolarizing(2))), 0.0);
}

TEST(SpectrumCsv, HeaderAndRows) {
  RngStream rng(9, 0);
  std::vector<ChannelSpectrum> spectra{analyze_spectrum(random_ginibre_kraus(1, 2, rng)),
                                       analyze_spectrum(random_ginibre_kraus(1, 2, rng))};
  std::ostringstream out;
  write_spectrum_csv(out, spectra);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "channel,re,im");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 8);
}
