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

#include <benchmark/benchmark.h>

#include <vector>

#include "oso/banditcore.hpp"
#include "oso/chanmodel.hpp"
#include "oso/closedform.hpp"
#include "oso/config.hpp"
#include "oso/harness.hpp"
#include "oso/random.hpp"

namespace {

using namespace oso;

void BM_Covariance(benchmark::State& state) {
  const harness::ExperimentConfig cfg;
  const chanmodel::ArrayGeometry geom = cfg.geometry();
  double aoa = -1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(chanmodel::covariance(geom, {aoa, 0.17, 1.0}));
    aoa = aoa > 1.0 ? -1.0 : aoa + 0.01;
  }
}
BENCHMARK(BM_Covariance);

void BM_ChannelDraw(benchmark::State& state) {
  const harness::ExperimentConfig cfg;
  const chanmodel::ChannelSampler sampler(chanmodel::covariance(cfg.geometry(), {0.4, 0.17, 1.0}));
  RandomStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.draw(rng));
}
BENCHMARK(BM_ChannelDraw);

void BM_TsSelect(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  RandomStream rng(2);
  std::vector<bandit::LinearArmPosterior> arms(k, bandit::LinearArmPosterior(9, 0.25, 6.0, 6.0));
  for (auto& arm : arms) {
    for (int i = 0; i < 20; ++i) {
      Eigen::VectorXd x(9);
      for (int j = 0; j < 9; ++j) x(j) = rng.normal();
      arm.update(x, rng.uniform());
    }
  }
  Eigen::VectorXd q = Eigen::VectorXd::Constant(9, 1.0 / 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(bandit::ts_select(arms, q, rng));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(k));
}
BENCHMARK(BM_TsSelect)->Arg(10)->Arg(80);

void BM_LinearPolicyStep(benchmark::State& state) {
  bandit::LinearThompsonPolicy policy(80, 8, bandit::PriorConfig{});
  RandomStream rng(3);
  Eigen::VectorXd q(8);
  for (int j = 0; j < 8; ++j) q(j) = rng.normal();
  for (auto _ : state) {
    const std::size_t arm = policy.select(0, q, rng);
    policy.observe(q, arm, rng.uniform());
  }
}
BENCHMARK(BM_LinearPolicyStep);

void BM_GenerateDataset(benchmark::State& state) {
  harness::ExperimentConfig cfg;
  cfg.k_devices = 80;
  cfg.horizon = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(harness::generate_dataset(cfg, RandomStream(4)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateDataset)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_OutageClosedForm(benchmark::State& state) {
  const harness::ExperimentConfig cfg;
  const closedform::AnalysisParams a = cfg.analysis(100);
  double beta = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(closedform::outage_probability(beta, a));
    beta = beta > 100.0 ? 0.1 : beta * 1.01;
  }
}
BENCHMARK(BM_OutageClosedForm);

void BM_OutageMonteCarlo(benchmark::State& state) {
  const harness::ExperimentConfig cfg;
  const closedform::AnalysisParams a = cfg.analysis(100);
  const std::vector<double> thresholds{10.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(closedform::outage_monte_carlo(a, thresholds, 4096, RandomStream(5)));
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_OutageMonteCarlo)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
