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

#include "rmtbench/rmt_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "rmtbench/errors.hpp"
#include "text_util.hpp"

namespace rmtbench {
namespace {

constexpr double kQuadratureTolerance = 1e-12;
constexpr unsigned kQuadratureDepth = 20;

}  // namespace

MPParams make_mp_params(std::size_t N, std::size_t r) {
  if (N == 0 || r == 0) throw Error(ErrorCode::kInvalidParams, "N and r must be positive");
  MPParams p;
  p.N = N;
  p.r = r;
  const double n = static_cast<double>(N);
  const double inv_sqrt_r = 1.0 / std::sqrt(static_cast<double>(r));
  p.kappa = 1.0 / (n * static_cast<double>(r));
  p.lambda_minus = (1.0 - inv_sqrt_r) * (1.0 - inv_sqrt_r) / n;
  p.lambda_plus = (1.0 + inv_sqrt_r) * (1.0 + inv_sqrt_r) / n;
  return p;
}

double mp_pdf(const MPParams& params, double lambda) {
  if (params.r == 1 && lambda == 0.0)
    throw Error(ErrorCode::kInvalidParams, "rank-1 density diverges at lambda = 0");
  if (lambda <= params.lambda_minus || lambda >= params.lambda_plus) return 0.0;
  const double radicand = (params.lambda_plus - lambda) * (lambda - params.lambda_minus);
  return std::sqrt(std::max(radicand, 0.0)) / (2.0 * std::numbers::pi * params.kappa * lambda);
}

double mp_cdf(const MPParams& params, double lambda) {
  if (lambda <= params.lambda_minus) return 0.0;
  if (lambda >= params.lambda_plus) return 1.0;
  const double lo = params.lambda_minus;
  const double width = params.lambda_plus - lo;
  const double theta_max = std::asin(std::sqrt((lambda - lo) / width));
  const double prefactor = width * width / (std::numbers::pi * params.kappa);
  auto integrand = [&](double theta) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    return prefactor * s * s * c * c / (lo + width * s * s);
  };
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      integrand, 0.0, theta_max, kQuadratureDepth, kQuadratureTolerance, &error);
  return std::clamp(value, 0.0, 1.0);
}

double mp_moment(const MPParams& params, unsigned m) {
  if (m == 0) throw Error(ErrorCode::kInvalidParams, "moment order must be at least 1");
  const double r = static_cast<double>(params.r);
  // C(m, l-1) and C(m, l) updated incrementally.
  double binom_lm1 = 1.0;                      // C(m, 0)
  double binom_l = static_cast<double>(m);     // C(m, 1)
  double r_pow = r;
  double sum = 0.0;
  for (unsigned l = 1; l <= m; ++l) {
    sum += binom_lm1 * binom_l * r_pow;
    binom_lm1 = binom_l;
    binom_l = binom_l * static_cast<double>(m - l) / static_cast<double>(l + 1);
    r_pow *= r;
  }
  const double scale = 1.0 / (static_cast<double>(params.N) * r);
  return std::pow(scale, static_cast<double>(m)) * sum / static_cast<double>(m);
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw Error(ErrorCode::kInvalidParams, "empirical distribution needs at least one sample");
  for (double x : samples_)
    if (!std::isfinite(x)) throw Error(ErrorCode::kInvalidParams, "empirical distribution has a non-finite sample");
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::mean() const noexcept {
  return std::accumulate(samples_.begin(), samples_.end(), 0.0) / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::variance() const noexcept {
  if (samples_.size() < 2) return 0.0;
  const double mu = mean();
  double acc = 0.0;
  for (double x : samples_) acc += (x - mu) * (x - mu);
  return acc / static_cast<double>(samples_.size() - 1);
}

double EmpiricalDistribution::kurtosis() const noexcept {
  const double mu = mean();
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : samples_) {
    const double d2 = (x - mu) * (x - mu);
    m2 += d2;
    m4 += d2 * d2;
  }
  const double n = static_cast<double>(samples_.size());
  m2 /= n;
  m4 /= n;
  return m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
}

double EmpiricalDistribution::cdf(double x) const noexcept {
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kInvalidParams, "quantile level must lie in [0, 1]");
  const double n = static_cast<double>(samples_.size());
  const auto k = static_cast<std::size_t>(std::max(0.0, std::ceil(p * n) - 1.0));
  return samples_[std::min(k, samples_.size() - 1)];
}

DensityMatrix sample_fixed_trace_wishart(std::size_t N, std::size_t r, RngStream& rng) {
  if (N == 0 || r == 0) throw Error(ErrorCode::kInvalidParams, "N and r must be positive");
  const ComplexMatrix g = sample_ginibre(N, N * r, rng);
  ComplexMatrix w = g * g.adjoint();
  w /= w.trace().real();
  w = 0.5 * (w + w.adjoint());
  return DensityMatrix(std::move(w));
}

ReferenceOutputDistribution reference_output_distribution(const MPParams& params, std::size_t sample_count,
                                                          RngStream rng) {
  if (sample_count < kMinReferenceSamples)
    throw Error(ErrorCode::kInvalidParams,
                "reference needs at least " + std::to_string(kMinReferenceSamples) + " samples");
  const std::size_t cols = params.N * params.r;
  const std::size_t rest = (params.N - 1) * cols;
  std::vector<double> samples(sample_count);
  // |g|^2 of a unit-variance complex Gaussian is Exp(1); W_00 only needs the
  // squared moduli of row 0 and of the remaining rows of G.
  for (auto& sample : samples) {
    double row0 = 0.0;
    for (std::size_t j = 0; j < cols; ++j) row0 -= std::log(rng.uniform());
    double others = 0.0;
    for (std::size_t j = 0; j < rest; ++j) others -= std::log(rng.uniform());
    sample = row0 / (row0 + others);
  }
  return ReferenceOutputDistribution{params, EmpiricalDistribution(std::move(samples)), sample_count,
                                     rng.master_seed(), rng.stream_index()};
}

double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  const auto& x = a.samples();
  const auto& y = b.samples();
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

double ks_distance(const EmpiricalDistribution& a, const ReferenceOutputDistribution& b) {
  return ks_distance(a, b.samples);
}

double ks_distance(const EmpiricalDistribution& a, const std::function<double(double)>& cdf) {
  const auto& x = a.samples();
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::kInvalidParams, "probability must lie in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

NormalProbabilityPlot normal_probability_points(const EmpiricalDistribution& d) {
  if (d.size() < 10) throw Error(ErrorCode::kInvalidParams, "normal probability plot needs at least 10 samples");
  NormalProbabilityPlot plot;
  const double mu = d.mean();
  const double sd = std::sqrt(d.variance());
  plot.degenerate = !(sd > 0.0) || sd <= 1e-14 * std::max(1.0, std::abs(mu));
  const double n = static_cast<double>(d.size());
  plot.points.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double position = (static_cast<double>(i) + 0.5) / n;
    const double sample = plot.degenerate ? 0.0 : (d.samples()[i] - mu) / sd;
    plot.points.push_back({inverse_normal_cdf(position), sample});
  }
  if (!plot.degenerate) {
    double sxx = 0.0;
    double sxy = 0.0;
    double mx = 0.0;
    double my = 0.0;
    for (const auto& p : plot.points) {
      mx += p.theoretical;
      my += p.sample;
    }
    mx /= n;
    my /= n;
    for (const auto& p : plot.points) {
      sxx += (p.theoretical - mx) * (p.theoretical - mx);
      sxy += (p.theoretical - mx) * (p.sample - my);
    }
    plot.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  return plot;
}

std::vector<CdfPoint> empirical_cdf(const EmpiricalDistribution& d) {
  std::vector<CdfPoint> points;
  const auto& x = d.samples();
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i + 1 < x.size() && x[i + 1] == x[i]) continue;
    points.push_back({x[i], static_cast<double>(i + 1) / n});
  }
  return points;
}

void write_cdf_csv(std::ostream& out, const std::vector<CdfPoint>& points) {
  out << "value,cumulative\n";
  for (const auto& p : points)
    out << detail::format_double(p.value) << ',' << detail::format_double(p.cumulative) << '\n';
}

void write_quantiles_csv(std::ostream& out, const NormalProbabilityPlot& plot) {
  out << "theoretical,sample\n";
  for (const auto& p : plot.points)
    out << detail::format_double(p.theoretical) << ',' << detail::format_double(p.sample) << '\n';
}

}  // namespace rmtbench
