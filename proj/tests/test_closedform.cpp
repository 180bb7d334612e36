// Copyright 2026 The OSO Bandit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oso/closedform.hpp"
#include "oso/errors.hpp"
#include "oso/quadrature.hpp"
#include "oso/random.hpp"
#include "test_support.hpp"

namespace oso::closedform {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

AnalysisParams params(std::size_t m, double p, double lambda, double noise) {
  AnalysisParams a;
  a.m_antennas = m;
  a.k_devices = 1;
  a.p_signal = p;
  a.p_interf = 1.0 / lambda;
  a.noise = noise;
  return a;
}

TEST(UpperIncGamma, Examples) {
  for (double x : {0.0, 0.3, 2.0, 11.0}) EXPECT_NEAR(upper_inc_gamma(1, x), std::exp(-x), 1e-15);
  EXPECT_DOUBLE_EQ(upper_inc_gamma(5, 0.0), 24.0);
  EXPECT_NEAR(upper_inc_gamma(3, 2.0), 10.0 * std::exp(-2.0), 1e-14);
  const double by_quadrature = integrate([](double t) { return t * t * std::exp(-t); }, 2.0, kInf);
  EXPECT_NEAR(upper_inc_gamma(3, 2.0), by_quadrature, 1e-10);
}

TEST(UpperIncGamma, DecreasingAndBounded) {
  for (int s : {1, 2, 5, 9}) {
    double last = upper_inc_gamma(s, 0.0);
    EXPECT_NEAR(last, std::tgamma(s), 1e-9);
    for (double x = 0.1; x < 30.0; x += 0.1) {
      const double v = upper_inc_gamma(s, x);
      EXPECT_LT(v, last);
      last = v;
    }
  }
  EXPECT_THROW(upper_inc_gamma(0, 1.0), DomainError);
  EXPECT_THROW(upper_inc_gamma(2, -1.0), DomainError);
}

TEST(MinInterference, CdfExamples) {
  EXPECT_EQ(min_interference_cdf(0.0, 2.0, 5), 0.0);
  EXPECT_NEAR(min_interference_cdf(std::log(2.0) / 10.0, 2.0, 5), 0.5, 1e-15);
  EXPECT_THROW(min_interference_cdf(-1.0, 1.0, 1), DomainError);
  EXPECT_THROW(min_interference_pdf(-1.0, 1.0, 1), DomainError);
}

TEST(MinInterference, MatchesOrderStatisticMonteCarlo) {
  RandomStream rng(1);
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> minima;
  for (int trial = 0; trial < 10000; ++trial) {
    double m = kInf;
    for (int k = 0; k < 16; ++k) m = std::min(m, exp1(rng.engine()));
    minima.push_back(m);
  }
  EXPECT_LE(testing::ks_statistic(minima, [](double y) { return min_interference_cdf(y, 1.0, 16); }),
            0.02);
  // Mean 1/16 and variance 1/256 within three standard errors.
  const double n = static_cast<double>(minima.size());
  EXPECT_NEAR(testing::mean(minima), 1.0 / 16.0, 3.0 * (1.0 / 16.0) / std::sqrt(n));
  EXPECT_NEAR(testing::variance(minima), 1.0 / 256.0, 3.0 * std::sqrt(8.0) / 256.0 / std::sqrt(n));
}

TEST(MinInterference, PdfIsNormalizedDerivative) {
  EXPECT_DOUBLE_EQ(min_interference_pdf(0.0, 0.5, 8), 4.0);
  EXPECT_NEAR(integrate([](double y) { return min_interference_pdf(y, 0.5, 8); }, 0.0, kInf), 1.0,
              1e-9);
  const double h = 1e-6;
  const double y = 0.3;
  EXPECT_NEAR((min_interference_cdf(y + h, 0.5, 8) - min_interference_cdf(y - h, 0.5, 8)) / (2 * h),
              min_interference_pdf(y, 0.5, 8), 1e-6);
}

TEST(MinInterference, ParamsOverloadUsesPerDevicePowerAndCount) {
  AnalysisParams a;
  a.k_devices = 20;
  a.p_interf = 4.0;
  EXPECT_DOUBLE_EQ(a.lambda_int(), 5.0);
  EXPECT_NEAR(min_interference_cdf(0.1, a), -std::expm1(-5.0 * 0.1), 1e-15);
  EXPECT_NEAR(min_interference_pdf(0.1, a), 5.0 * std::exp(-0.5), 1e-15);
}

TEST(MinInterference, CdfIncreasesWithK) {
  double last = 0.0;
  for (std::size_t k : {10u, 100u, 1000u, 10000u}) {
    const double v = min_interference_cdf(0.002, 1.0, k);
    EXPECT_GT(v, last);
    last = v;
  }
  EXPECT_GT(last, 1.0 - 1e-8);
}

TEST(SinrPdf, VanishesAtZeroForMultipleAntennas) {
  for (std::size_t m : {2u, 4u, 8u}) EXPECT_EQ(sinr_pdf(0.0, params(m, 1.0, 1.0, 1.0)), 0.0);
  EXPECT_GT(sinr_pdf(0.0, params(1, 1.0, 1.0, 1.0)), 0.0);
  EXPECT_THROW(sinr_pdf(-1.0, params(2, 1.0, 1.0, 1.0)), DomainError);
}

TEST(SinrPdf, MatchesPrintedFormWithIncompleteGamma) {
  // Direct, non-log evaluation at moderate parameters.
  for (std::size_t m : {1u, 3u, 6u}) {
    const AnalysisParams a = params(m, 1.7, 0.8, 0.6);
    const double lam = 0.8;
    for (double y : {0.05, 0.9, 4.0, 12.0}) {
      const double z = lam + y / 1.7;
      const double direct = lam * std::exp(lam * 0.6) / (std::pow(1.7, m) * std::tgamma(m)) *
                            std::pow(y, m - 1.0) / std::pow(z, m + 1.0) *
                            upper_inc_gamma(static_cast<int>(m) + 1, z * 0.6);
      EXPECT_NEAR(sinr_pdf(y, a) / direct, 1.0, 1e-12);
    }
  }
}

TEST(SinrPdf, NormalizedForSeveralArrays) {
  for (std::size_t m : {1u, 2u, 4u, 8u}) {
    for (double lam : {0.2, 3.0}) {
      const AnalysisParams a = params(m, 2.0, lam, 0.5);
      EXPECT_NEAR(integrate([&](double y) { return sinr_pdf(y, a); }, 0.0, kInf), 1.0, 1e-6);
    }
  }
}

TEST(SinrPdf, InterferenceLimitedSingleAntennaShape) {
  // sigma^2 -> 0, M = 1: f(y) = lambda P / (lambda P + y)^2, CDF y / (lambda P + y).
  const double p = 2.0;
  const double lam = 0.5;
  const AnalysisParams a = params(1, p, lam, 1e-12);
  for (double y : {0.01, 0.5, 3.0, 40.0}) {
    EXPECT_NEAR(sinr_pdf(y, a), lam * p / std::pow(lam * p + y, 2), 1e-9);
  }
  RandomStream rng(3);
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> ratio;
  for (int i = 0; i < 10000; ++i) {
    const double signal = p * exp1(rng.engine());
    const double interference = exp1(rng.engine()) / lam;
    ratio.push_back(signal / (interference + 1e-12));
  }
  EXPECT_LE(testing::ks_statistic(ratio, [&](double y) { return y / (lam * p + y); }), 0.03);
}

TEST(Outage, EndpointsAndMonotonicity) {
  const AnalysisParams a = params(4, 2.5, 5.7, 1.0);
  EXPECT_EQ(outage_probability(0.0, a), 0.0);
  EXPECT_EQ(outage_probability(kInf, a), 1.0);
  EXPECT_GT(outage_probability(1e6, a), 1.0 - 1e-9);
  double last = 0.0;
  for (double b = 0.01; b < 200.0; b *= 1.2) {
    const double v = outage_probability(b, a);
    EXPECT_GE(v, last);
    EXPECT_LE(v, 1.0);
    last = v;
  }
  EXPECT_THROW(outage_probability(-1.0, a), DomainError);
}

TEST(Outage, EqualsIntegralOfDensity) {
  for (std::size_t m : {1u, 2u, 4u, 8u}) {
    const AnalysisParams a = params(m, 1.3, 2.0, 0.7);
    double acc = 0.0;
    double prev = 0.0;
    for (double b = 0.05; b < 60.0; b *= 1.5) {
      acc += integrate([&](double y) { return sinr_pdf(y, a); }, prev, b, 1e-13);
      prev = b;
      EXPECT_NEAR(outage_probability(b, a), acc, 1e-8);
    }
  }
}

TEST(Outage, MonteCarloAgreesWithClosedForm) {
  AnalysisParams a;
  a.m_antennas = 4;
  a.k_devices = 100;
  a.p_signal = 2.5;
  a.p_interf = 17.5;
  a.noise = 1.0;
  const std::vector<double> thresholds{0.0, 3.0, 10.0, 30.0, 1e9};
  const std::size_t trials = 20000;
  const auto emp = outage_monte_carlo(a, thresholds, trials, RandomStream(9));
  EXPECT_EQ(emp[0], 0.0);
  EXPECT_EQ(emp[4], 1.0);
  for (std::size_t i = 1; i < 4; ++i) {
    const double cf = outage_probability(thresholds[i], a);
    const double se = std::sqrt(std::max(cf * (1.0 - cf), 1e-4) / static_cast<double>(trials));
    EXPECT_NEAR(emp[i], cf, 3.0 * se) << "threshold " << thresholds[i];
  }
}

TEST(Outage, MonteCarloIsThreadCountInvariant) {
  AnalysisParams a;
  a.m_antennas = 2;
  a.k_devices = 10;
  const std::vector<double> thresholds{0.5, 2.0};
  const auto one = outage_monte_carlo(a, thresholds, 10000, RandomStream(4), 1);
  const auto four = outage_monte_carlo(a, thresholds, 10000, RandomStream(4), 4);
  EXPECT_EQ(one, four);
  EXPECT_THROW(outage_monte_carlo(a, thresholds, 0, RandomStream(4)), DomainError);
}

TEST(Params, Validation) {
  AnalysisParams a;
  EXPECT_NO_THROW(a.validate());
  a.noise = 0.0;
  EXPECT_THROW(a.validate(), DomainError);
  a = AnalysisParams{};
  a.k_devices = 0;
  EXPECT_THROW(a.validate(), DomainError);
}

TEST(Tabulate, EvaluatesOnGrid) {
  const std::vector<double> grid{0.0, 1.0, 2.0};
  const DistributionCurve c = tabulate([](double x) { return x * x; }, grid);
  EXPECT_EQ(c.grid, grid);
  EXPECT_EQ(c.values, (std::vector<double>{0.0, 1.0, 4.0}));
  const std::vector<double> unsorted{0.0, 2.0, 1.0};
  EXPECT_THROW(tabulate([](double x) { return x; }, unsorted), DomainError);
  EXPECT_THROW(tabulate([](double) { return -1.0; }, grid), NumericalError);
}

}  // namespace
}  // namespace oso::closedform
