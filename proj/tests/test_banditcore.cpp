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

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "oso/banditcore.hpp"
#include "oso/errors.hpp"
#include "oso/random.hpp"
#include "test_support.hpp"

namespace oso::bandit {
namespace {

using C = std::complex<double>;

airlink::Beamformer beam(std::initializer_list<C> v) {
  airlink::Beamformer w;
  w.weights.resize(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (C x : v) w.weights(i++) = x;
  return w;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x(i++) = d;
  return x;
}

// ---- contexts -----------------------------------------------------------

TEST(Context, RealUnitVector) {
  EXPECT_EQ(build_context(beam({1.0, 0.0, 0.0, 0.0})), vec({1, 0, 0, 0, 0, 0, 0, 0}));
}

TEST(Context, ImaginaryUnitVector) {
  EXPECT_EQ(build_context(beam({C(0, 1), 0.0, 0.0, 0.0})), vec({0, 0, 0, 0, 1, 0, 0, 0}));
}

TEST(Context, UnitNormBeamformersGiveUnitNormContexts) {
  RandomStream rng(1);
  for (int i = 0; i < 100; ++i) {
    airlink::Beamformer w;
    w.weights.resize(4);
    for (int m = 0; m < 4; ++m) w.weights(m) = rng.complex_normal();
    w.weights.normalize();
    EXPECT_NEAR(build_context(w).norm(), 1.0, 1e-14);
  }
}

TEST(Context, ScalesByInverseSquaredNorm) {
  EXPECT_EQ(build_context(beam({2.0, 0.0})), vec({0.5, 0.0, 0.0, 0.0}));
  EXPECT_THROW(build_context(beam({0.0, 0.0})), DegenerateInputError);
}

// ---- posterior ----------------------------------------------------------

TEST(Posterior, ZeroObservationsReturnPrior) {
  Eigen::MatrixXd precision(2, 2);
  precision << 2.0, 0.5, 0.5, 1.0;
  const LinearArmPosterior arm(precision, vec({0.3, -1.0}), 4.0, 3.0);
  EXPECT_LT((arm.mean() - vec({0.3, -1.0})).norm(), 1e-14);
  EXPECT_LT((arm.covariance() - precision.inverse()).norm(), 1e-14);
  EXPECT_EQ(arm.a(), 4.0);
  EXPECT_NEAR(arm.b(), 3.0, 1e-14);
}

TEST(Posterior, SingleObservationOneStepAlgebra) {
  LinearArmPosterior arm(3, 0.25, 6.0, 6.0);
  const Eigen::VectorXd q = vec({0.2, -0.7, 1.1});
  arm.update(q, 0.8);
  const Eigen::MatrixXd precision = q * q.transpose() + 0.25 * Eigen::MatrixXd::Identity(3, 3);
  const Eigen::VectorXd expected = precision.inverse() * q * 0.8;
  EXPECT_LT((arm.mean() - expected).norm(), 1e-13);
  EXPECT_EQ(arm.a(), 6.5);
  EXPECT_EQ(arm.count(), 1u);
}

TEST(Posterior, BatchMatchesSequentialScalarConjugateUpdate) {
  RandomStream rng(2);
  for (int dataset = 0; dataset < 20; ++dataset) {
    const double lambda0 = rng.uniform(0.1, 3.0);
    const double mu0 = rng.uniform(-2.0, 2.0);
    const double a0 = rng.uniform(1.5, 8.0);
    const double b0 = rng.uniform(0.5, 8.0);
    LinearArmPosterior arm(Eigen::MatrixXd::Constant(1, 1, lambda0), vec({mu0}), a0, b0);
    testing::ScalarNig oracle{lambda0, mu0, a0, b0};
    const int n = 1 + static_cast<int>(rng.index(60));
    for (int i = 0; i < n; ++i) {
      const double x = rng.uniform(-1.0, 1.0);
      const double y = 1.3 * x + 0.2 * rng.normal();
      arm.update(vec({x}), y);
      oracle.observe(x, y);
    }
    EXPECT_NEAR(arm.covariance()(0, 0), 1.0 / oracle.precision, 1e-10);
    EXPECT_NEAR(arm.mean()(0), oracle.mean, 1e-10);
    EXPECT_NEAR(arm.a(), oracle.a, 1e-12);
    EXPECT_NEAR(arm.b(), oracle.b, 1e-10);
  }
}

TEST(Posterior, OrderInvariance) {
  RandomStream rng(3);
  std::vector<std::pair<Eigen::VectorXd, double>> data;
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd x(4);
    for (int j = 0; j < 4; ++j) x(j) = rng.normal();
    data.emplace_back(x, rng.uniform());
  }
  LinearArmPosterior forward(4, 0.25, 6.0, 6.0);
  for (const auto& [x, y] : data) forward.update(x, y);
  std::reverse(data.begin(), data.end());
  std::swap(data[3], data[150]);
  LinearArmPosterior shuffled(4, 0.25, 6.0, 6.0);
  for (const auto& [x, y] : data) shuffled.update(x, y);
  EXPECT_LT((forward.covariance() - shuffled.covariance()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((forward.mean() - shuffled.mean()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(forward.a(), shuffled.a());
  EXPECT_NEAR(forward.b(), shuffled.b(), 1e-10);
}

TEST(Posterior, ShapeIsExactAndScaleStaysPositive) {
  RandomStream rng(4);
  LinearArmPosterior arm(9, 0.25, 6.0, 6.0);
  for (int t = 1; t <= 500; ++t) {
    Eigen::VectorXd x(9);
    for (int j = 0; j < 9; ++j) x(j) = rng.normal();
    arm.update(x, rng.uniform());
    EXPECT_EQ(arm.a(), 6.0 + 0.5 * t);
    EXPECT_GT(arm.b(), 0.0);
  }
  const Eigen::MatrixXd& s = arm.covariance();
  EXPECT_LT((s - s.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(s.llt().info(), Eigen::Success);
}

TEST(Posterior, ConsistencyOnLinearData) {
  RandomStream rng(5);
  const Eigen::VectorXd beta = vec({0.5, -1.0, 2.0});
  LinearArmPosterior arm(3, 0.25, 6.0, 6.0);
  for (int t = 0; t < 1000; ++t) {
    Eigen::VectorXd x(3);
    for (int j = 0; j < 3; ++j) x(j) = rng.normal();
    arm.update(x, x.dot(beta) + 0.3 * rng.normal());
  }
  const double sd = std::sqrt(arm.b() / (arm.a() - 1.0) * arm.covariance().trace());
  EXPECT_LE((arm.mean() - beta).norm(), 3.0 * sd);
}

TEST(Posterior, ValidatesInputs) {
  EXPECT_THROW(LinearArmPosterior(Eigen::MatrixXd::Identity(2, 2), vec({0.0}), 1.0, 1.0),
               DomainError);
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, 0.0, 1.0;
  EXPECT_THROW(LinearArmPosterior(asym, vec({0.0, 0.0}), 1.0, 1.0), DomainError);
  EXPECT_THROW(LinearArmPosterior(-Eigen::MatrixXd::Identity(2, 2), vec({0.0, 0.0}), 1.0, 1.0),
               DomainError);
  EXPECT_THROW(LinearArmPosterior(2, 1.0, 0.0, 1.0), DomainError);
  LinearArmPosterior arm(2, 1.0, 1.0, 1.0);
  EXPECT_THROW(arm.update(vec({1.0}), 0.0), DomainError);
  EXPECT_THROW(arm.update(vec({1.0, NAN}), 0.0), DomainError);
}

// ---- sampling and selection ----------------------------------------------

TEST(Sampling, PriorSamplesAreCentred) {
  const LinearArmPosterior arm(4, 1.0, 6.0, 6.0);
  RandomStream rng(6);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(4);
  for (int i = 0; i < 10000; ++i) sum += ts_sample(arm, rng);
  EXPECT_LE((sum / 10000.0).norm(), 0.05);
}

TEST(Sampling, VanishingScaleCollapsesToMean) {
  const LinearArmPosterior arm(Eigen::MatrixXd::Identity(2, 2), vec({1.0, 2.0}), 6.0, 1e-14);
  RandomStream rng(7);
  for (int i = 0; i < 100; ++i) EXPECT_LT((ts_sample(arm, rng) - vec({1.0, 2.0})).norm(), 1e-5);
}

TEST(Sampling, ScalarRegressionRecoversSlope) {
  RandomStream rng(8);
  LinearArmPosterior arm(1, 0.25, 6.0, 6.0);
  for (int i = 0; i < 50; ++i) {
    const double x = rng.uniform(-1.0, 1.0);
    arm.update(vec({x}), 2.0 * x + 0.1 * rng.normal());
  }
  std::vector<double> draws;
  for (int i = 0; i < 10000; ++i) draws.push_back(ts_sample(arm, rng)(0));
  const double sd = std::sqrt(arm.b() / (arm.a() - 1.0) * arm.covariance()(0, 0));
  EXPECT_NEAR(testing::mean(draws), 2.0, 3.0 * sd);
  // Sample spread matches the Student-t marginal.
  EXPECT_NEAR(std::sqrt(testing::variance(draws)), sd, 0.05 * sd);
}

TEST(Select, SingleArm) {
  const std::vector<LinearArmPosterior> arms{LinearArmPosterior(2, 1.0, 6.0, 6.0)};
  RandomStream rng(9);
  EXPECT_EQ(ts_select(arms, vec({1.0, 0.0}), rng), 0u);
  EXPECT_THROW(ts_select(std::vector<LinearArmPosterior>{}, vec({1.0}), rng), DomainError);
}

TEST(Select, SeparatedPosteriorWins) {
  std::vector<LinearArmPosterior> arms;
  for (int k = 0; k < 5; ++k) {
    arms.emplace_back(Eigen::MatrixXd::Identity(2, 2), k == 3 ? vec({1.0, 0.0}) : vec({0.0, 0.0}),
                      6.0, 1e-12);
  }
  RandomStream rng(10);
  int hits = 0;
  for (int i = 0; i < 1000; ++i) hits += ts_select(arms, vec({1.0, 0.0}), rng) == 3 ? 1 : 0;
  EXPECT_GE(hits, 990);
}

TEST(Select, IdenticalPosteriorsSplitEvenly) {
  const std::vector<LinearArmPosterior> arms(2, LinearArmPosterior(2, 1.0, 6.0, 6.0));
  RandomStream rng(11);
  int first = 0;
  for (int i = 0; i < 10000; ++i) first += ts_select(arms, vec({0.6, 0.8}), rng) == 0 ? 1 : 0;
  EXPECT_NEAR(first / 10000.0, 0.5, 0.05);
}

TEST(Select, ArgmaxInvariantToPositiveScale) {
  std::vector<LinearArmPosterior> arms;
  RandomStream data(12);
  for (int k = 0; k < 6; ++k) {
    arms.emplace_back(3, 0.5, 6.0, 6.0);
    for (int i = 0; i < 5; ++i) {
      arms.back().update(vec({data.normal(), data.normal(), data.normal()}), data.uniform());
    }
  }
  const Eigen::VectorXd q = vec({0.3, -0.2, 0.9});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RandomStream a(seed);
    RandomStream b(seed);
    EXPECT_EQ(ts_select(arms, q, a), ts_select(arms, 7.5 * q, b));
  }
}

TEST(RoundRobin, PlaysEachArmOnceInOrder) {
  EXPECT_EQ(round_robin_init(3), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_TRUE(round_robin_init(0).empty());
}

TEST(Uniform, FrequenciesAndDeterminism) {
  RandomStream rng(13);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(uniform_select(1, rng), 0u);
  std::vector<int> count(4, 0);
  for (int i = 0; i < 10000; ++i) ++count[uniform_select(4, rng)];
  for (int c : count) EXPECT_NEAR(c / 10000.0, 0.25, 0.015);
  RandomStream a(1), b(1), c(2);
  std::vector<std::size_t> sa, sb, sc;
  for (int i = 0; i < 50; ++i) {
    sa.push_back(uniform_select(10, a));
    sb.push_back(uniform_select(10, b));
    sc.push_back(uniform_select(10, c));
  }
  EXPECT_EQ(sa, sb);
  EXPECT_NE(sa, sc);
  EXPECT_THROW(uniform_select(0, rng), DomainError);
}

// ---- traces and regret --------------------------------------------------

EpisodeTrace make_trace(const std::vector<double>& reward, const std::vector<double>& optimal) {
  EpisodeTrace trace;
  trace.policy = "test";
  for (std::size_t t = 0; t < reward.size(); ++t) trace.steps.push_back({t, t, 0, reward[t], optimal[t]});
  return trace;
}

TEST(Regret, OracleTraceIsZero) {
  const std::vector<double> r{0.3, 0.9, 0.5};
  for (double v : cumulative_regret(make_trace(r, r))) EXPECT_EQ(v, 0.0);
}

TEST(Regret, ConstantGapGrowsLinearly) {
  const std::vector<double> opt(100, 0.9);
  const std::vector<double> got(100, 0.65);
  const std::vector<double> regret = cumulative_regret(make_trace(got, opt));
  for (std::size_t t = 0; t < regret.size(); ++t) {
    EXPECT_NEAR(regret[t], 0.25 * static_cast<double>(t + 1), 1e-12);
  }
  const EpisodeTrace trace = make_trace(got, opt);
  EXPECT_NEAR(trace.cumulative_reward(), 65.0, 1e-10);
  EXPECT_NEAR(trace.cumulative_optimal(), 90.0, 1e-10);
}

TEST(Regret, TraceValidation) {
  EXPECT_NO_THROW(make_trace({0.2}, {0.3}).validate());
  EXPECT_THROW(make_trace({0.4}, {0.3}).validate(), DomainError);
  EXPECT_THROW(make_trace({-0.1}, {0.3}).validate(), DomainError);
  EpisodeTrace gap = make_trace({0.1, 0.1}, {0.2, 0.2});
  gap.steps[1].step = 5;
  EXPECT_THROW(gap.validate(), DomainError);
}

// ---- policies -----------------------------------------------------------

TEST(LinearPolicy, AppendsInterceptFeature) {
  LinearThompsonPolicy with(3, 2, PriorConfig{0.25, 6.0, 6.0, true});
  EXPECT_EQ(with.features(vec({0.1, 0.2})), vec({0.1, 0.2, 1.0}));
  EXPECT_EQ(with.posterior(0).dim(), 3u);
  LinearThompsonPolicy without(3, 2, PriorConfig{0.25, 6.0, 6.0, false});
  EXPECT_EQ(without.features(vec({0.1, 0.2})), vec({0.1, 0.2}));
  EXPECT_THROW(without.features(vec({0.1})), DomainError);
  EXPECT_TRUE(with.round_robin_warmup());
  EXPECT_EQ(with.name(), "linear");
}

TEST(LinearPolicy, StateSnapshotRoundTrips) {
  const PriorConfig prior{0.25, 6.0, 6.0, true};
  LinearThompsonPolicy original(4, 3, prior);
  RandomStream data(14);
  for (int i = 0; i < 100; ++i) {
    original.observe(vec({data.normal(), data.normal(), data.normal()}), data.index(4),
                     data.uniform());
  }
  std::stringstream state;
  original.save_state(state);
  LinearThompsonPolicy restored(4, 3, prior);
  restored.load_state(state);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(original.posterior(k).xtx(), restored.posterior(k).xtx());
    EXPECT_EQ(original.posterior(k).xty(), restored.posterior(k).xty());
    EXPECT_EQ(original.posterior(k).yty(), restored.posterior(k).yty());
    EXPECT_EQ(original.posterior(k).count(), restored.posterior(k).count());
  }
  RandomStream a(15), b(15);
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd q = vec({data.normal(), data.normal(), data.normal()});
    EXPECT_EQ(original.select(0, q, a), restored.select(0, q, b));
  }
}

TEST(LinearPolicy, StateSnapshotRejectsMismatch) {
  const PriorConfig prior{0.25, 6.0, 6.0, true};
  LinearThompsonPolicy small(2, 3, prior);
  std::stringstream state;
  small.save_state(state);
  LinearThompsonPolicy big(3, 3, prior);
  EXPECT_THROW(big.load_state(state), ConfigError);
  std::stringstream truncated("oso-linear-thompson 1\narms 2\n");
  LinearThompsonPolicy other(2, 3, prior);
  EXPECT_THROW(other.load_state(truncated), ConfigError);
}

TEST(UniformPolicyTest, SelectsInRange) {
  UniformPolicy policy(5);
  RandomStream rng(16);
  EXPECT_FALSE(policy.round_robin_warmup());
  for (int i = 0; i < 100; ++i) EXPECT_LT(policy.select(0, vec({0.0}), rng), 5u);
}

TEST(PriorConfigTest, Validation) {
  EXPECT_NO_THROW(PriorConfig{}.validate());
  EXPECT_THROW((PriorConfig{0.0, 6.0, 6.0, true}.validate()), DomainError);
  EXPECT_THROW((PriorConfig{0.25, 0.0, 6.0, true}.validate()), DomainError);
}

}  // namespace
}  // namespace oso::bandit
