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

// Superoperator spectra: spectral gap, Girko-disk statistics, steady-state
// extraction, and convergence-time estimates.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "rmtbench/channel.hpp"
#include "rmtbench/linalg.hpp"

namespace rmtbench {

struct SpectralTolerances {
  double fixed_point_assert = 1e-7;   // |leading - 1|
  double fixed_point_detect = 1e-6;   // unit-circle window for degeneracy
  double hermitize_check = 1e-6;      // ||X - X^dag|| before Hermitising
};

struct ChannelSpectrum {
  std::vector<Complex> eigenvalues;  // descending modulus
  Complex leading;                   // eigenvalue nearest 1
  double gap = 0.0;                  // 1 - |lambda_2|
  double girko_radius = 1.0;         // 1/sqrt(rank)
  std::size_t rank = 1;

  // Eigenvalues other than `leading`, in the original order.
  std::vector<Complex> subleading() const;
  double second_modulus() const noexcept { return 1.0 - gap; }
};

// Throws kNoFixedPoint when no eigenvalue lies within 1e-7 of 1.
ChannelSpectrum analyze_spectrum(const KrausChannel& channel, const SpectralTolerances& tol = {});

struct SteadyStateDecomposition {
  DensityMatrix state;
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // unitary; column k pairs with eigenvalues[k]
};

// The lambda = 1 eigenvector, reshaped, phase-aligned by its trace,
// Hermitised, normalised to unit trace, then eigendecomposed.
// Throws kDegenerateFixedSpace when two or more eigenvalues have modulus
// >= 1 - fixed_point_detect, kNoFixedPoint when none is near 1.
SteadyStateDecomposition steady_state(const KrausChannel& channel, const SpectralTolerances& tol = {});

// ceil(log(epsilon) / log(1/sqrt(rank))). Throws kRankOne for rank 1 and
// kInvalidParams for epsilon outside (0, 1).
std::size_t convergence_iterations(std::size_t rank, double epsilon);

// Fraction of non-leading eigenvalues with modulus <= girko_radius + slack,
// pooled over the ensemble. Throws kInvalidParams for an empty ensemble.
double girko_fraction(std::span<const ChannelSpectrum> spectra, double slack);

// Mean over non-leading eigenvalues of max(0, |lambda| - girko_radius).
double disk_violation(const ChannelSpectrum& spectrum);

// CSV rows "channel,re,im" for every eigenvalue of every spectrum.
void write_spectrum_csv(std::ostream& out, std::span<const ChannelSpectrum> spectra);

}  // namespace rmtbench
