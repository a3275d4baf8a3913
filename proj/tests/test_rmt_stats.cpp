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
#include <filesystem>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rmtbench/errors.hpp"
#include "rmtbench/reference_cache.hpp"
#include "rmtbench/rmt_stats.hpp"
#include "support/oracles.hpp"

using namespace rmtbench;

TEST(MPParams, Edges) {
  const auto p = make_mp_params(8, 2);
  EXPECT_NEAR(p.lambda_plus, 0.36428, 5e-6);
  EXPECT_NEAR(p.lambda_minus, 0.010723, 5e-7);
  EXPECT_DOUBLE_EQ(p.kappa, 1.0 / 16.0);
  EXPECT_THROW(make_mp_params(0, 2), Error);
  EXPECT_THROW(make_mp_params(4, 0), Error);
}

TEST(MPPdf, ZeroOutsideSupport) {
  const auto p = make_mp_params(8, 2);
  EXPECT_EQ(mp_pdf(p, 0.0), 0.0);
  EXPECT_EQ(mp_pdf(p, 0.5), 0.0);
  EXPECT_EQ(mp_pdf(p, -1.0), 0.0);
  EXPECT_GT(mp_pdf(p, 0.1), 0.0);
}

TEST(MPPdf, NormalisationAndMean) {
  for (std::size_t N : {2u, 4u, 8u, 32u}) {
    for (std::size_t r : {2u, 3u, 4u, 16u}) {
      const auto p = make_mp_params(N, r);
      // Independent quadrature in the angle variable removes the edge singularities.
      const double w = p.lambda_plus - p.lambda_minus;
      auto lam = [&](double t) { return p.lambda_minus + w * std::sin(t) * std::sin(t); };
      auto jac = [&](double t) { return w * std::sin(2 * t); };
      using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
      const double norm = GK::integrate([&](double t) { return mp_pdf(p, lam(t)) * jac(t); }, 0.0, M_PI / 2, 10, 1e-12);
      const double mean =
          GK::integrate([&](double t) { return lam(t) * mp_pdf(p, lam(t)) * jac(t); }, 0.0, M_PI / 2, 10, 1e-12);
      EXPECT_NEAR(norm, 1.0, 1e-6) << N << "," << r;
      EXPECT_NEAR(mean, 1.0 / static_cast<double>(N), 1e-6) << N << "," << r;
    }
  }
}

TEST(MPCdf, MatchesSimpsonOracle) {
  const auto p = make_mp_params(8, 2);
  EXPECT_EQ(mp_cdf(p, 0.0), 0.0);
  EXPECT_EQ(mp_cdf(p, 1.0), 1.0);
  for (double x : {0.02, 0.05, 0.1, 0.2, 0.3, 0.36}) EXPECT_NEAR(mp_cdf(p, x), oracle::mp_cdf_simpson(8, 2, x), 1e-7) << x;
}

TEST(MPMoment, Examples) {
  for (std::size_t N : {2u, 4u, 8u})
    for (std::size_t r : {2u, 5u}) EXPECT_NEAR(mp_moment(make_mp_params(N, r), 1), 1.0 / static_cast<double>(N), 1e-15);
  EXPECT_NEAR(mp_moment(make_mp_params(8, 2), 2), 0.0234375, 1e-15);
  for (std::size_t N : {4u, 8u})
    for (std::size_t r : {2u, 4u}) {
      const auto p = make_mp_params(N, r);
      const double n = static_cast<double>(N);
      EXPECT_NEAR(mp_moment(p, 2) - 1 / (n * n), 1 / (n * n * static_cast<double>(r)), 1e-15);
    }
  EXPECT_THROW(mp_moment(make_mp_params(4, 2), 0), Error);
}

TEST(MPMoment, MatchesNarayanaOracle) {
  for (std::size_t N : {2u, 4u, 8u})
    for (std::size_t r : {1u, 2u, 3u, 4u})
      for (unsigned m = 1; m <= 6; ++m) {
        const double expect = oracle::narayana_moment(N, r, m);
        EXPECT_NEAR(mp_moment(make_mp_params(N, r), m), expect, 1e-12 * expect) << N << "," << r << "," << m;
      }
}

TEST(MPMoment, MatchesPdfIntegral) {
  const auto p = make_mp_params(4, 3);
  const double w = p.lambda_plus - p.lambda_minus;
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  for (unsigned m = 1; m <= 4; ++m) {
    const double v = GK::integrate(
        [&](double t) {
          const double l = p.lambda_minus + w * std::sin(t) * std::sin(t);
          return std::pow(l, m) * mp_pdf(p, l) * w * std::sin(2 * t);
        },
        0.0, M_PI / 2, 10, 1e-13);
    EXPECT_NEAR(mp_moment(p, m), v, 1e-9) << m;
  }
}

TEST(EmpiricalDistribution, Basics) {
  EmpiricalDistribution d({4, 2, 1, 2});
  EXPECT_EQ(d.samples(), (std::vector<double>{1, 2, 2, 4}));
  EXPECT_DOUBLE_EQ(d.mean(), 2.25);
  EXPECT_DOUBLE_EQ(d.cdf(0.5), 0.0);
  EXPECT_DOUBLE_EQ(d.cdf(2.0), 0.75);
  EXPECT_DOUBLE_EQ(d.cdf(10), 1.0);
  EXPECT_DOUBLE_EQ(d.quantile(0.0), 1.0);
  EXPECT_DOUBLE_EQ(d.quantile(1.0), 4.0);
  EXPECT_DOUBLE_EQ(EmpiricalDistribution({3.0}).variance(), 0.0);
  EXPECT_THROW(EmpiricalDistribution({}), Error);
  EXPECT_THROW(EmpiricalDistribution({1.0, std::nan("")}), Error);
  EXPECT_THROW(d.quantile(1.5), Error);
}

TEST(FixedTraceWishart, ScalarAndValidity) {
  RngStream rng(1, 0);
  EXPECT_NEAR(sample_fixed_trace_wishart(1, 3, rng).matrix()(0, 0).real(), 1.0, 1e-15);
  const auto w = sample_fixed_trace_wishart(8, 2, rng);
  EXPECT_NEAR(w.matrix().trace().real(), 1.0, 1e-12);
  EXPECT_GE(eig_hermitian(w.matrix()).values.front(), -1e-12);
  EXPECT_THROW(sample_fixed_trace_wishart(0, 2, rng), Error);
}

TEST(FixedTraceWishart, ConcentratesAtLargeRank) {
  RngStream rng(2, 0);
  const double N = 4, r = 64;
  const double bound = 3 * std::sqrt(1 / (N * N * r)) * N;
  double worst = 0;
  for (int k = 0; k < 100; ++k)
    for (double v : eig_hermitian(sample_fixed_trace_wishart(4, 64, rng).matrix()).values)
      worst = std::max(worst, std::abs(v - 1 / N));
  EXPECT_LE(worst, bound);
}

TEST(FixedTraceWishart, PooledSpectrumMatchesQuadratureCdf) {
  RngStream rng(3, 0);
  std::vector<double> eigs;
  for (int k = 0; k < 500; ++k)
    for (double v : eig_hermitian(sample_fixed_trace_wishart(8, 2, rng).matrix()).values) eigs.push_back(v);
  const double ks = ks_distance(EmpiricalDistribution(eigs), [](double x) { return oracle::mp_cdf_simpson(8, 2, x); });
  EXPECT_LE(ks, 0.03);
}

TEST(FixedTraceWishart, SecondAndThirdMomentsMatchExactFiniteN) {
  RngStream rng(4, 0);
  for (std::size_t N : {4u, 8u}) {
    for (std::size_t r : {2u, 4u}) {
      std::vector<double> m2, m3;
      for (int k = 0; k < 2000; ++k)
        for (double v : eig_hermitian(sample_fixed_trace_wishart(N, r, rng).matrix()).values) {
          m2.push_back(v * v);
          m3.push_back(v * v * v);
        }
      for (unsigned m : {2u, 3u}) {
        const EmpiricalDistribution d(m == 2 ? m2 : m3);
        const double se = std::sqrt(d.variance() / static_cast<double>(d.size()));
        EXPECT_NEAR(d.mean(), oracle::fixed_trace_moment(N, r, m), 5 * se) << N << "," << r << "," << m;
      }
    }
  }
}

TEST(ReferenceOutput, MeanAndRange) {
  const auto ref = reference_output_distribution(make_mp_params(8, 2), 20000, RngStream(5, 0));
  EXPECT_EQ(ref.sample_count, 20000u);
  EXPECT_EQ(ref.seed, 5u);
  for (double v : ref.samples.samples()) {
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
  const double se = std::sqrt(ref.samples.variance() / 20000.0);
  EXPECT_NEAR(ref.samples.mean(), 1.0 / 8, 5 * se);
  EXPECT_THROW(reference_output_distribution(make_mp_params(8, 2), 100, RngStream(5, 0)), Error);
}

TEST(ReferenceOutput, MatchesBetaLaw) {
  const auto ref = reference_output_distribution(make_mp_params(8, 2), 100000, RngStream(6, 0));
  EXPECT_LE(ks_distance(ref.samples, [](double x) { return oracle::beta_reference_cdf(8, 2, x); }), 0.01);
}

TEST(ReferenceOutput, MatchesSpectrumTimesHaarVector) {
  // Independent construction: eigenvalues of a Wishart draw weighted by
  // |<psi_i|x>|^2 with psi_i the columns of a Haar unitary.
  oracle::Gen gen(7);
  std::vector<double> direct;
  for (int k = 0; k < 100000; ++k) {
    const auto g = gen.gaussian_matrix(8, 16);
    const ComplexMatrix w = g * g.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>> es(w);
    const Eigen::VectorXd lam = es.eigenvalues() / es.eigenvalues().sum();
    const auto u = gen.unitary(8);
    double pr = 0;
    for (int i = 0; i < 8; ++i) pr += lam(i) * std::norm(u(0, i));
    direct.push_back(pr);
  }
  const auto ref = reference_output_distribution(make_mp_params(8, 2), 1000000, RngStream(1, 0));
  EXPECT_LE(ks_distance(EmpiricalDistribution(direct), ref.samples), 0.01);
}

TEST(ReferenceOutput, NarrowsWithRank) {
  double prev = 1e9;
  for (std::size_t r : {2u, 4u, 8u}) {
    const auto ref = reference_output_distribution(make_mp_params(8, r), 50000, RngStream(8, r));
    EXPECT_LT(ref.samples.variance(), prev) << r;
    const double n = 8, m = 8.0 * static_cast<double>(r);
    EXPECT_NEAR(ref.samples.variance(), (n - 1) / (n * n * (n * m + 1)), 0.05 * (n - 1) / (n * n * (n * m + 1)));
    prev = ref.samples.variance();
  }
}

TEST(ReferenceOutput, BasisInvariance) {
  RngStream rng(9, 0);
  std::vector<double> pooled, first;
  for (int k = 0; k < 100000; ++k) {
    const auto w = sample_fixed_trace_wishart(4, 2, rng);
    first.push_back(w.matrix()(0, 0).real());
    if (k < 25000)
      for (int x = 0; x < 4; ++x) pooled.push_back(w.matrix()(x, x).real());
  }
  EXPECT_LE(ks_distance(EmpiricalDistribution(pooled), EmpiricalDistribution(first)), 0.01);
}

TEST(PorterThomas, ScaledOverlapIsExponential) {
  // N|<psi|x>|^2 is N * Beta(1, N - 1): mean 1, variance (N - 1)/(N + 1) -> 1.
  oracle::Gen gen(10);
  const int n = 512;
  std::vector<double> v;
  for (int k = 0; k < 100000; ++k) {
    ComplexMatrix psi = gen.gaussian_matrix(n, 1);
    psi /= psi.norm();
    v.push_back(n * std::norm(psi(0, 0)));
  }
  const EmpiricalDistribution d(v);
  const double se = std::sqrt(d.variance() / static_cast<double>(d.size()));
  EXPECT_NEAR(d.mean(), 1.0, 5 * se);
  // Standard error of the sample variance of an exponential is sqrt(8/n).
  EXPECT_NEAR(d.variance(), 1.0, 5 * std::sqrt(8.0 / static_cast<double>(d.size())));
}

TEST(KsDistance, Examples) {
  const EmpiricalDistribution a({0.1, 0.5, 0.7}), z({0, 0, 0, 0}), o({1, 1, 1, 1});
  EXPECT_EQ(ks_distance(a, a), 0.0);
  EXPECT_EQ(ks_distance(z, o), 1.0);
  EXPECT_EQ(ks_distance(EmpiricalDistribution({1, 2}), EmpiricalDistribution({2, 1, 1, 2})), 0.0);
  EXPECT_DOUBLE_EQ(ks_distance(EmpiricalDistribution({1, 2, 3, 4}), EmpiricalDistribution({3, 4, 5, 6})), 0.5);
  EXPECT_DOUBLE_EQ(ks_distance(EmpiricalDistribution({0.5}), [](double x) { return x; }), 0.5);
}

TEST(KsDistance, AgainstReferenceOverload) {
  const auto ref = reference_output_distribution(make_mp_params(4, 2), 10000, RngStream(11, 0));
  const EmpiricalDistribution d({0.1, 0.2, 0.3});
  EXPECT_EQ(ks_distance(d, ref), ks_distance(d, ref.samples));
}

TEST(NormalProbability, NormalSamplesHaveUnitSlope) {
  RngStream rng(12, 0);
  std::vector<double> v(100000);
  for (auto& x : v) x = 3.0 + 2.0 * rng.normal();
  const auto plot = normal_probability_points(EmpiricalDistribution(v));
  EXPECT_FALSE(plot.degenerate);
  EXPECT_EQ(plot.points.size(), v.size());
  EXPECT_GE(plot.slope, 0.98);
  EXPECT_LE(plot.slope, 1.02);
  EXPECT_NEAR(plot.points.front().theoretical, inverse_normal_cdf(0.5 / 100000), 1e-12);
}

TEST(NormalProbability, DegenerateAndTooFew) {
  const auto plot = normal_probability_points(EmpiricalDistribution(std::vector<double>(20, 0.3)));
  EXPECT_TRUE(plot.degenerate);
  for (const auto& p : plot.points) EXPECT_EQ(p.sample, 0.0);
  EXPECT_THROW(normal_probability_points(EmpiricalDistribution({1, 2, 3})), Error);
}

TEST(NormalProbability, HeavyTailAtLargeDimension) {
  const auto ref = reference_output_distribution(make_mp_params(32, 2), 20000, RngStream(13, 0));
  EXPECT_GT(ref.samples.kurtosis(), 3.0);
}

TEST(InverseNormal, KnownValues) {
  EXPECT_NEAR(inverse_normal_cdf(0.5), 0.0, 1e-12);
  EXPECT_NEAR(inverse_normal_cdf(0.975), 1.959963984540054, 1e-8);
  EXPECT_NEAR(inverse_normal_cdf(1e-6), -4.753424308822899, 1e-8);
  EXPECT_NEAR(inverse_normal_cdf(0.02), -2.053748910631823, 1e-8);
  EXPECT_THROW(inverse_normal_cdf(0.0), Error);
}

TEST(EmpiricalCdf, Examples) {
  auto one = empirical_cdf(EmpiricalDistribution({0.7}));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].value, 0.7);
  EXPECT_EQ(one[0].cumulative, 1.0);
  auto steps = empirical_cdf(EmpiricalDistribution({1, 2, 2, 4}));
  ASSERT_EQ(steps.size(), 3u);
  EXPECT_EQ(steps[0].value, 1);
  EXPECT_EQ(steps[0].cumulative, 0.25);
  EXPECT_EQ(steps[1].value, 2);
  EXPECT_EQ(steps[1].cumulative, 0.75);
  EXPECT_EQ(steps[2].value, 4);
  EXPECT_EQ(steps[2].cumulative, 1.0);
}

TEST(EmpiricalCdf, CsvOutputs) {
  std::ostringstream cdf, q;
  write_cdf_csv(cdf, empirical_cdf(EmpiricalDistribution({1, 2})));
  EXPECT_EQ(cdf.str().substr(0, cdf.str().find('\n')), "value,cumulative");
  std::vector<double> v;
  for (int i = 0; i < 10; ++i) v.push_back(i);
  write_quantiles_csv(q, normal_probability_points(EmpiricalDistribution(v)));
  EXPECT_EQ(q.str().substr(0, q.str().find('\n')), "theoretical,sample");
}

TEST(ReferenceCache, SharedBuildAndDiskRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "rmtbench_cache_test";
  std::filesystem::remove_all(dir);
  {
    ReferenceCache cache(dir);
    ReferenceCache::Handle a, b;
    std::thread t1([&] { a = cache.get(4, 2, 3, 10000); });
    std::thread t2([&] { b = cache.get(4, 2, 3, 10000); });
    t1.join();
    t2.join();
    EXPECT_EQ(a.get(), b.get());
    ASSERT_TRUE(cache.file_for(4, 2, 3, 10000).has_value());
    EXPECT_TRUE(std::filesystem::exists(*cache.file_for(4, 2, 3, 10000)));
  }
  ReferenceCache fresh(dir);
  const auto c = fresh.get(4, 2, 3, 10000);
  const auto direct = reference_output_distribution(make_mp_params(4, 2), 10000, RngStream(3, 0));
  EXPECT_EQ(c->samples.samples(), direct.samples.samples());
  std::filesystem::remove_all(dir);
}
