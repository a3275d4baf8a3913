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

// Random-matrix reference layer: the unit-trace Marchenko-Pastur law, its
// moments, fixed-trace Wishart sampling, the Wishart-diagonal reference for
// output probabilities, and distribution distances.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "rmtbench/linalg.hpp"
#include "rmtbench/rng.hpp"

namespace rmtbench {

// Unit-trace Marchenko-Pastur parameters for an N-dimensional state with
// Wishart rank ratio r: kappa = 1/(N r), edges (1/N)(1 +- 1/sqrt(r))^2.
struct MPParams {
  std::size_t N = 1;
  std::size_t r = 1;
  double kappa = 1.0;
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
};

MPParams make_mp_params(std::size_t N, std::size_t r);

// Density on [lambda_minus, lambda_plus], zero outside. For r == 1 the
// density diverges at lambda = 0 and that evaluation throws kInvalidParams.
double mp_pdf(const MPParams& params, double lambda);

// CDF by adaptive Gauss-Kronrod quadrature after the substitution
// lambda = lambda_minus + (lambda_plus - lambda_minus) sin^2(theta), which
// removes the square-root edge behaviour.
double mp_cdf(const MPParams& params, double lambda);

// m-th moment: (1/(N r))^m (1/m) sum_{l=1..m} C(m, l-1) C(m, l) r^l.
// Gives mean 1/N and variance 1/(N^2 r). Throws kInvalidParams for m == 0.
double mp_moment(const MPParams& params, unsigned m);

// Sorted, non-empty sample set.
class EmpiricalDistribution {
 public:
  // Throws kInvalidParams for an empty or non-finite sample set.
  explicit EmpiricalDistribution(std::vector<double> samples);

  const std::vector<double>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }

  double mean() const noexcept;
  double variance() const noexcept;  // unbiased (n - 1); 0 for a single sample
  double kurtosis() const noexcept;  // m4 / m2^2, not excess
  double cdf(double x) const noexcept;  // right-continuous
  double quantile(double p) const;      // lower empirical quantile, p in [0, 1]

 private:
  std::vector<double> samples_;
};

DensityMatrix sample_fixed_trace_wishart(std::size_t N, std::size_t r, RngStream& rng);

// Monte Carlo law of <0|W|0> for W = G G^dag / Tr(G G^dag), G an N x (N r)
// Ginibre matrix.
struct ReferenceOutputDistribution {
  MPParams params;
  EmpiricalDistribution samples;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

inline constexpr std::size_t kMinReferenceSamples = 10'000;

// Throws kInvalidParams when sample_count < kMinReferenceSamples.
ReferenceOutputDistribution reference_output_distribution(const MPParams& params, std::size_t sample_count,
                                                          RngStream rng);

// Exact sup-norm distance between two empirical CDFs (sorted-merge sweep).
double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);
double ks_distance(const EmpiricalDistribution& a, const ReferenceOutputDistribution& b);
// One-sample distance against a continuous CDF.
double ks_distance(const EmpiricalDistribution& a, const std::function<double(double)>& cdf);

struct QuantilePoint {
  double theoretical = 0.0;
  double sample = 0.0;
};

struct NormalProbabilityPlot {
  std::vector<QuantilePoint> points;
  // Zero sample variance: every standardised sample quantile is 0.
  bool degenerate = false;
  // Least-squares slope of sample on theoretical quantiles (0 if degenerate).
  double slope = 0.0;
};

// Standardised sample quantiles against standard-normal quantiles at the
// plotting positions (i - 0.5)/n. Throws kInvalidParams below 10 samples.
NormalProbabilityPlot normal_probability_points(const EmpiricalDistribution& d);

double inverse_normal_cdf(double p);

struct CdfPoint {
  double value = 0.0;
  double cumulative = 0.0;
};

// One point per distinct value: (value, fraction of samples <= value).
std::vector<CdfPoint> empirical_cdf(const EmpiricalDistribution& d);

void write_cdf_csv(std::ostream& out, const std::vector<CdfPoint>& points);
void write_quantiles_csv(std::ostream& out, const NormalProbabilityPlot& plot);

}  // namespace rmtbench
