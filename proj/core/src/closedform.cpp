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

#include "oso/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "oso/airlink.hpp"
#include "oso/chanmodel.hpp"
#include "oso/errors.hpp"
#include "oso/parallel.hpp"

namespace oso::closedform {
namespace {

constexpr std::size_t kTrialsPerChunk = 4096;

// log sum_{j=0}^{n} x^j / j!, x >= 0.
double log_exp_series(int n, double x) {
  if (x == 0.0) return 0.0;
  const double lx = std::log(x);
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(n + 1);
  for (int j = 0; j <= n; ++j) {
    terms[j] = j * lx - std::lgamma(j + 1.0);
    peak = std::max(peak, terms[j]);
  }
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - peak);
  return peak + std::log(sum);
}

void check_nonnegative(double v, const char* what) {
  if (!(v >= 0.0)) throw DomainError(std::string(what) + " must be non-negative");
}

}  // namespace

void AnalysisParams::validate() const {
  if (m_antennas < 1) throw DomainError("need at least one antenna");
  if (k_devices < 1) throw DomainError("need at least one MTD");
  if (!(p_signal > 0.0) || !(p_interf > 0.0) || !(noise > 0.0)) {
    throw DomainError("signal, interference and noise powers must be positive");
  }
}

double upper_inc_gamma(int s, double x) {
  if (s < 1) throw DomainError("upper incomplete gamma needs integer s >= 1");
  check_nonnegative(x, "incomplete gamma argument");
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < s; ++k) {
    term *= x / k;
    sum += term;
  }
  return std::tgamma(static_cast<double>(s)) * std::exp(-x) * sum;
}

double min_interference_cdf(double y, double per_device_rate, std::size_t k) {
  check_nonnegative(y, "interference level");
  return -std::expm1(-per_device_rate * static_cast<double>(k) * y);
}

double min_interference_pdf(double y, double per_device_rate, std::size_t k) {
  check_nonnegative(y, "interference level");
  const double rate = per_device_rate * static_cast<double>(k);
  return rate * std::exp(-rate * y);
}

double min_interference_cdf(double y, const AnalysisParams& params) {
  return min_interference_cdf(y, 1.0 / params.p_interf, params.k_devices);
}

double min_interference_pdf(double y, const AnalysisParams& params) {
  return min_interference_pdf(y, 1.0 / params.p_interf, params.k_devices);
}

// Evaluated as (lambda M / P) u^{M-1} (lambda+u)^{-(M+1)} e^{-u sigma^2}
// sum_{j<=M} x^j/j! with u = y/P and x = (lambda+u) sigma^2, which is the
// same expression with e^{lambda sigma^2} cancelled against the e^{-x}
// inside Gamma(M+1, x). Done in logs so large lambda sigma^2 cannot overflow.
double sinr_pdf(double y, const AnalysisParams& params) {
  params.validate();
  check_nonnegative(y, "SINR");
  const int m = static_cast<int>(params.m_antennas);
  const double lambda = params.lambda_int();
  const double u = y / params.p_signal;
  if (u == 0.0 && m > 1) return 0.0;
  const double x = (lambda + u) * params.noise;
  double log_f = std::log(lambda * m / params.p_signal) -
                 (m + 1) * std::log(lambda + u) - u * params.noise + log_exp_series(m, x);
  if (m > 1) log_f += (m - 1) * std::log(u);
  return std::exp(log_f);
}

// Term k of the sum, after cancelling k! against Gamma(k+1, x):
// lambda/(lambda+u) (u/(lambda+u))^k e^{-u sigma^2} sum_{j<=k} x^j/j!.
double outage_probability(double beta, const AnalysisParams& params) {
  params.validate();
  check_nonnegative(beta, "SINR threshold");
  if (std::isinf(beta)) return 1.0;
  const int m = static_cast<int>(params.m_antennas);
  const double lambda = params.lambda_int();
  const double u = beta / params.p_signal;
  const double x = (lambda + u) * params.noise;
  const double log_base = std::log(lambda) - std::log(lambda + u) - u * params.noise;
  double survival = 0.0;
  for (int k = 0; k < m; ++k) {
    double log_term = log_base + log_exp_series(k, x);
    if (k > 0) {
      if (u == 0.0) break;
      log_term += k * (std::log(u) - std::log(lambda + u));
    }
    survival += std::exp(log_term);
  }
  return std::clamp(1.0 - survival, 0.0, 1.0);
}

std::vector<double> outage_monte_carlo(const AnalysisParams& params,
                                       std::span<const double> thresholds,
                                       std::size_t trials, const RandomStream& rng,
                                       unsigned threads) {
  params.validate();
  if (trials < 1) throw DomainError("need at least one trial");
  for (double t : thresholds) check_nonnegative(t, "SINR threshold");

  airlink::PowerConfig pw;
  pw.p_c = params.p_signal;
  pw.n0 = params.noise;
  const std::vector<double> powers(params.k_devices, params.p_interf);

  const std::size_t chunks = (trials + kTrialsPerChunk - 1) / kTrialsPerChunk;
  std::vector<std::vector<std::size_t>> counts(chunks,
                                               std::vector<std::size_t>(thresholds.size(), 0));
  parallel_for(chunks, threads, [&](std::size_t chunk) {
    RandomStream stream = rng.substream(chunk);
    const std::size_t begin = chunk * kTrialsPerChunk;
    const std::size_t end = std::min(trials, begin + kTrialsPerChunk);
    std::vector<chanmodel::ChannelVector> h_kb(params.k_devices);
    for (std::size_t trial = begin; trial < end; ++trial) {
      const chanmodel::ChannelVector h_c = chanmodel::sample_rayleigh(params.m_antennas, stream);
      for (auto& h : h_kb) h = chanmodel::sample_rayleigh(params.m_antennas, stream);
      const airlink::Beamformer w = airlink::mrc(h_c);
      const std::size_t k = airlink::oracle_select(w, h_kb, powers);
      const double sinr = airlink::sinr_htd(w, h_c, h_kb[k], pw, params.p_interf);
      for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (sinr <= thresholds[i]) ++counts[chunk][i];
      }
    }
  });

  std::vector<double> result(thresholds.size(), 0.0);
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    std::size_t total = 0;
    for (const auto& c : counts) total += c[i];
    result[i] = static_cast<double>(total) / static_cast<double>(trials);
  }
  return result;
}

DistributionCurve tabulate(const std::function<double(double)>& f,
                           std::span<const double> grid) {
  DistributionCurve curve;
  curve.grid.assign(grid.begin(), grid.end());
  for (std::size_t i = 1; i < curve.grid.size(); ++i) {
    if (!(curve.grid[i] > curve.grid[i - 1])) {
      throw DomainError("curve grid must be strictly increasing");
    }
  }
  curve.values.reserve(grid.size());
  for (double x : grid) {
    const double v = f(x);
    if (!std::isfinite(v) || v < 0.0) throw NumericalError("curve value invalid");
    curve.values.push_back(v);
  }
  return curve;
}

}  // namespace oso::closedform
