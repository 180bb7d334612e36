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

#pragma once

// Contextual bandit engine: beamformer contexts, Thompson sampling over
// per-arm Bayesian linear regression with unknown noise variance, a uniform
// baseline, and regret bookkeeping.

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oso/airlink.hpp"
#include "oso/random.hpp"

namespace oso::bandit {

using ContextVector = Eigen::VectorXd;

// [Re(w); Im(w)] / |w|^2.
ContextVector build_context(const airlink::Beamformer& w);

struct PriorConfig {
  double lambda_prior = 0.25;  // Lambda_0 = lambda_prior * I
  double a0 = 6.0;
  double b0 = 6.0;
  // Append a constant 1 to every context before regression.
  bool intercept = true;

  void validate() const;
};

/// Normal-inverse-gamma posterior for one arm's reward model
/// r = x^T beta + eps, eps ~ N(0, sigma^2).
///
/// Only sufficient statistics (X^T X, X^T Y, Y^T Y, t) are accumulated. The
/// posterior parameters
///
///   Sigma_t = (X^T X + Lambda_0)^{-1}
///   mu_t    = Sigma_t (Lambda_0 mu_0 + X^T Y)
///   a_t     = a_0 + t/2
///   b_t     = b_0 + (Y^T Y + mu_0^T Lambda_0 mu_0 - mu_t^T Sigma_t^{-1} mu_t) / 2
///
/// are recomputed from them with a fresh Cholesky solve the first time they
/// are needed after an update.
class LinearArmPosterior {
 public:
  LinearArmPosterior(Eigen::MatrixXd prior_precision, Eigen::VectorXd prior_mean, double a0,
                     double b0);
  // mu_0 = 0, Lambda_0 = lambda_prior * I.
  LinearArmPosterior(std::size_t dim, double lambda_prior, double a0, double b0);

  std::size_t dim() const { return static_cast<std::size_t>(prior_mean_.size()); }
  std::size_t count() const { return count_; }

  void update(const Eigen::VectorXd& x, double r);

  const Eigen::MatrixXd& covariance() const;  // Sigma_t
  const Eigen::VectorXd& mean() const;        // mu_t
  double a() const { return a0_ + 0.5 * static_cast<double>(count_); }
  double b() const;
  // Lower Cholesky factor of Sigma_t.
  const Eigen::MatrixXd& covariance_factor() const;

  const Eigen::MatrixXd& prior_precision() const { return prior_precision_; }
  const Eigen::VectorXd& prior_mean() const { return prior_mean_; }
  double a0() const { return a0_; }
  double b0() const { return b0_; }
  const Eigen::MatrixXd& xtx() const { return xtx_; }
  const Eigen::VectorXd& xty() const { return xty_; }
  double yty() const { return yty_; }

  // Restores sufficient statistics (used by state snapshots).
  void set_statistics(Eigen::MatrixXd xtx, Eigen::VectorXd xty, double yty, std::size_t count);

 private:
  void refresh() const;

  Eigen::MatrixXd prior_precision_;
  Eigen::VectorXd prior_mean_;
  double a0_;
  double b0_;
  Eigen::MatrixXd xtx_;
  Eigen::VectorXd xty_;
  double yty_ = 0.0;
  std::size_t count_ = 0;

  mutable bool stale_ = true;
  mutable Eigen::MatrixXd covariance_;
  mutable Eigen::MatrixXd covariance_factor_;
  mutable Eigen::VectorXd mean_;
  mutable double b_ = 0.0;
};

// sigma^2 ~ InvGamma(a_t, b_t), then beta ~ N(mu_t, sigma^2 Sigma_t).
Eigen::VectorXd ts_sample(const LinearArmPosterior& arm, RandomStream& rng);

void ts_update(LinearArmPosterior& arm, const Eigen::VectorXd& x, double r);

// argmax_k x^T beta_k with beta_k ~ ts_sample(arms[k]); lowest index on ties.
std::size_t ts_select(std::span<const LinearArmPosterior> arms, const Eigen::VectorXd& x,
                      RandomStream& rng);

// Arms 0..k-1 in order.
std::vector<std::size_t> round_robin_init(std::size_t k);

std::size_t uniform_select(std::size_t k, RandomStream& rng);

struct StepRecord {
  std::size_t step = 0;
  std::size_t context_id = 0;
  std::size_t arm = 0;
  double reward = 0.0;
  double optimal_reward = 0.0;

  bool operator==(const StepRecord&) const = default;
};

struct EpisodeTrace {
  std::string policy;
  std::vector<StepRecord> steps;

  std::size_t horizon() const { return steps.size(); }
  double cumulative_reward() const;
  double cumulative_optimal() const;
  void validate() const;

  bool operator==(const EpisodeTrace&) const = default;
};

// Prefix sums of optimal_reward - reward.
std::vector<double> cumulative_regret(const EpisodeTrace& trace);

/// Arm-selection policy driven by run_bandit().
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string_view name() const = 0;
  virtual std::size_t arms() const = 0;
  // Play every arm once, in order, before the first select().
  virtual bool round_robin_warmup() const { return false; }
  virtual std::size_t select(std::size_t context_id, const ContextVector& q,
                             RandomStream& rng) = 0;
  virtual void observe(const ContextVector& q, std::size_t arm, double reward) {
    (void)q;
    (void)arm;
    (void)reward;
  }
};

/// Thompson sampling with one LinearArmPosterior per arm.
class LinearThompsonPolicy : public Policy {
 public:
  LinearThompsonPolicy(std::size_t arms, std::size_t context_dim, const PriorConfig& prior);

  std::string_view name() const override { return "linear"; }
  std::size_t arms() const override { return posteriors_.size(); }
  bool round_robin_warmup() const override { return true; }
  std::size_t select(std::size_t context_id, const ContextVector& q,
                     RandomStream& rng) override;
  void observe(const ContextVector& q, std::size_t arm, double reward) override;

  const LinearArmPosterior& posterior(std::size_t arm) const { return posteriors_.at(arm); }
  Eigen::VectorXd features(const ContextVector& q) const;

  // Text snapshot: one value per line in a fixed order, see save_state().
  void save_state(std::ostream& out) const;
  void load_state(std::istream& in);

 private:
  std::size_t context_dim_;
  PriorConfig prior_;
  std::vector<LinearArmPosterior> posteriors_;
};

class UniformPolicy : public Policy {
 public:
  explicit UniformPolicy(std::size_t arms) : arms_(arms) {}
  std::string_view name() const override { return "uniform"; }
  std::size_t arms() const override { return arms_; }
  std::size_t select(std::size_t, const ContextVector&, RandomStream& rng) override {
    return uniform_select(arms_, rng);
  }

 private:
  std::size_t arms_;
};

}  // namespace oso::bandit
