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

#include "oso/banditcore.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "oso/errors.hpp"
#include "oso/textio.hpp"

namespace oso::bandit {

ContextVector build_context(const airlink::Beamformer& w) {
  const double norm2 = w.norm_squared();
  if (!(norm2 > 0.0)) throw DegenerateInputError("context of a zero beamformer");
  const Eigen::Index m = w.weights.size();
  ContextVector q(2 * m);
  q.head(m) = w.weights.real() / norm2;
  q.tail(m) = w.weights.imag() / norm2;
  return q;
}

void PriorConfig::validate() const {
  if (!(lambda_prior > 0.0)) throw DomainError("prior precision scale must be positive");
  if (!(a0 > 0.0) || !(b0 > 0.0)) throw DomainError("inverse-gamma hyperparameters must be positive");
}

LinearArmPosterior::LinearArmPosterior(Eigen::MatrixXd prior_precision,
                                       Eigen::VectorXd prior_mean, double a0, double b0)
    : prior_precision_(std::move(prior_precision)),
      prior_mean_(std::move(prior_mean)),
      a0_(a0),
      b0_(b0) {
  const Eigen::Index d = prior_mean_.size();
  if (d == 0 || prior_precision_.rows() != d || prior_precision_.cols() != d) {
    throw DomainError("prior precision and mean dimensions disagree");
  }
  if (!prior_precision_.isApprox(prior_precision_.transpose())) {
    throw DomainError("prior precision must be symmetric");
  }
  if (prior_precision_.llt().info() != Eigen::Success) {
    throw DomainError("prior precision must be positive definite");
  }
  if (!(a0 > 0.0) || !(b0 > 0.0)) throw DomainError("a0 and b0 must be positive");
  xtx_ = Eigen::MatrixXd::Zero(d, d);
  xty_ = Eigen::VectorXd::Zero(d);
}

LinearArmPosterior::LinearArmPosterior(std::size_t dim, double lambda_prior, double a0,
                                       double b0)
    : LinearArmPosterior(lambda_prior * Eigen::MatrixXd::Identity(dim, dim),
                         Eigen::VectorXd::Zero(dim), a0, b0) {}

void LinearArmPosterior::update(const Eigen::VectorXd& x, double r) {
  if (x.size() != prior_mean_.size()) throw DomainError("feature dimension mismatch");
  if (!x.allFinite() || !std::isfinite(r)) throw DomainError("non-finite observation");
  xtx_.noalias() += x * x.transpose();
  xty_ += r * x;
  yty_ += r * r;
  ++count_;
  stale_ = true;
}

void LinearArmPosterior::set_statistics(Eigen::MatrixXd xtx, Eigen::VectorXd xty, double yty,
                                        std::size_t count) {
  if (xtx.rows() != xtx_.rows() || xtx.cols() != xtx_.cols() || xty.size() != xty_.size()) {
    throw DomainError("sufficient statistic dimensions disagree");
  }
  xtx_ = std::move(xtx);
  xty_ = std::move(xty);
  yty_ = yty;
  count_ = count;
  stale_ = true;
}

void LinearArmPosterior::refresh() const {
  if (!stale_) return;
  const Eigen::MatrixXd precision = xtx_ + prior_precision_;
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success) throw NumericalError("posterior precision not SPD");
  const Eigen::Index d = precision.rows();
  covariance_ = llt.solve(Eigen::MatrixXd::Identity(d, d));
  covariance_ = 0.5 * (covariance_ + covariance_.transpose());
  mean_ = llt.solve(prior_precision_ * prior_mean_ + xty_);
  Eigen::LLT<Eigen::MatrixXd> cov_llt(covariance_);
  if (cov_llt.info() != Eigen::Success) throw NumericalError("posterior covariance not SPD");
  covariance_factor_ = cov_llt.matrixL();
  const double prior_term = prior_mean_.dot(prior_precision_ * prior_mean_);
  const double fit_term = mean_.dot(precision * mean_);
  b_ = b0_ + 0.5 * (yty_ + prior_term - fit_term);
  stale_ = false;
}

const Eigen::MatrixXd& LinearArmPosterior::covariance() const {
  refresh();
  return covariance_;
}

const Eigen::VectorXd& LinearArmPosterior::mean() const {
  refresh();
  return mean_;
}

double LinearArmPosterior::b() const {
  refresh();
  return b_;
}

const Eigen::MatrixXd& LinearArmPosterior::covariance_factor() const {
  refresh();
  return covariance_factor_;
}

Eigen::VectorXd ts_sample(const LinearArmPosterior& arm, RandomStream& rng) {
  const double b = arm.b();
  if (!(b > 0.0)) throw NumericalError("posterior scale b_t is not positive");
  const double sigma2 = 1.0 / rng.gamma(arm.a(), b);
  Eigen::VectorXd z(arm.dim());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return arm.mean() + std::sqrt(sigma2) * (arm.covariance_factor() * z);
}

void ts_update(LinearArmPosterior& arm, const Eigen::VectorXd& x, double r) { arm.update(x, r); }

std::size_t ts_select(std::span<const LinearArmPosterior> arms, const Eigen::VectorXd& x,
                      RandomStream& rng) {
  if (arms.empty()) throw DomainError("no arms to select from");
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < arms.size(); ++k) {
    const double score = x.dot(ts_sample(arms[k], rng));
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

std::vector<std::size_t> round_robin_init(std::size_t k) {
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

std::size_t uniform_select(std::size_t k, RandomStream& rng) {
  if (k < 1) throw DomainError("no arms to select from");
  return rng.index(k);
}

double EpisodeTrace::cumulative_reward() const {
  double sum = 0.0;
  for (const auto& s : steps) sum += s.reward;
  return sum;
}

double EpisodeTrace::cumulative_optimal() const {
  double sum = 0.0;
  for (const auto& s : steps) sum += s.optimal_reward;
  return sum;
}

void EpisodeTrace::validate() const {
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    if (s.step != i) throw DomainError("trace steps must be consecutive");
    if (!(s.reward >= 0.0) || !(s.reward <= s.optimal_reward)) {
      throw DomainError("trace reward outside [0, optimal]");
    }
  }
}

std::vector<double> cumulative_regret(const EpisodeTrace& trace) {
  std::vector<double> regret;
  regret.reserve(trace.steps.size());
  double sum = 0.0;
  for (const auto& s : trace.steps) {
    sum += s.optimal_reward - s.reward;
    regret.push_back(sum);
  }
  return regret;
}

LinearThompsonPolicy::LinearThompsonPolicy(std::size_t arms, std::size_t context_dim,
                                           const PriorConfig& prior)
    : context_dim_(context_dim), prior_(prior) {
  prior_.validate();
  if (arms < 1) throw DomainError("policy needs at least one arm");
  if (context_dim < 1) throw DomainError("context dimension must be positive");
  const std::size_t dim = context_dim + (prior_.intercept ? 1 : 0);
  posteriors_.reserve(arms);
  for (std::size_t k = 0; k < arms; ++k) {
    posteriors_.emplace_back(dim, prior_.lambda_prior, prior_.a0, prior_.b0);
  }
}

Eigen::VectorXd LinearThompsonPolicy::features(const ContextVector& q) const {
  if (static_cast<std::size_t>(q.size()) != context_dim_) {
    throw DomainError("context dimension mismatch");
  }
  if (!prior_.intercept) return q;
  Eigen::VectorXd x(q.size() + 1);
  x << q, 1.0;
  return x;
}

std::size_t LinearThompsonPolicy::select(std::size_t, const ContextVector& q,
                                         RandomStream& rng) {
  return ts_select(posteriors_, features(q), rng);
}

void LinearThompsonPolicy::observe(const ContextVector& q, std::size_t arm, double reward) {
  ts_update(posteriors_.at(arm), features(q), reward);
}

// Layout, one token pair per line:
//   oso-linear-thompson 1
//   arms <K> / context_dim <c> / intercept <0|1> / lambda_prior / a0 / b0
//   then per arm: count, yty, xty[i] for each i, xtx[i][j] row-major.
void LinearThompsonPolicy::save_state(std::ostream& out) const {
  out << "oso-linear-thompson 1\n";
  out << "arms " << posteriors_.size() << '\n';
  out << "context_dim " << context_dim_ << '\n';
  out << "intercept " << (prior_.intercept ? 1 : 0) << '\n';
  out << "lambda_prior " << format_double(prior_.lambda_prior) << '\n';
  out << "a0 " << format_double(prior_.a0) << '\n';
  out << "b0 " << format_double(prior_.b0) << '\n';
  for (const auto& arm : posteriors_) {
    out << "count " << arm.count() << '\n';
    out << "yty " << format_double(arm.yty()) << '\n';
    for (Eigen::Index i = 0; i < arm.xty().size(); ++i) {
      out << "xty " << format_double(arm.xty()(i)) << '\n';
    }
    for (Eigen::Index i = 0; i < arm.xtx().rows(); ++i) {
      for (Eigen::Index j = 0; j < arm.xtx().cols(); ++j) {
        out << "xtx " << format_double(arm.xtx()(i, j)) << '\n';
      }
    }
  }
}

void LinearThompsonPolicy::load_state(std::istream& in) {
  auto expect = [&in](std::string_view key) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("state snapshot truncated");
    const auto space = line.find(' ');
    if (space == std::string::npos || std::string_view(line).substr(0, space) != key) {
      throw ConfigError("state snapshot: expected '" + std::string(key) + "', got '" + line + "'");
    }
    return line.substr(space + 1);
  };
  if (expect("oso-linear-thompson") != "1") throw ConfigError("unsupported state version");
  if (parse_size(expect("arms")) != posteriors_.size() ||
      parse_size(expect("context_dim")) != context_dim_ ||
      parse_size(expect("intercept")) != (prior_.intercept ? 1u : 0u)) {
    throw ConfigError("state snapshot shape does not match this policy");
  }
  if (parse_double(expect("lambda_prior")) != prior_.lambda_prior ||
      parse_double(expect("a0")) != prior_.a0 || parse_double(expect("b0")) != prior_.b0) {
    throw ConfigError("state snapshot prior does not match this policy");
  }
  for (auto& arm : posteriors_) {
    const std::size_t count = parse_size(expect("count"));
    const double yty = parse_double(expect("yty"));
    const Eigen::Index d = static_cast<Eigen::Index>(arm.dim());
    Eigen::VectorXd xty(d);
    for (Eigen::Index i = 0; i < d; ++i) xty(i) = parse_double(expect("xty"));
    Eigen::MatrixXd xtx(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) xtx(i, j) = parse_double(expect("xtx"));
    }
    arm.set_statistics(std::move(xtx), std::move(xty), yty, count);
  }
}

}  // namespace oso::bandit
