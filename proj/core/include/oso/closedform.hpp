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

// Closed-form laws for opportunistic MTD selection over i.i.d. Rayleigh links.
//
// With MRC at an M-antenna receiver, the desired term X = P |h_c|^2 is
// Gamma(M, P), and each candidate interferer contributes an exponential
// residual power with mean P_m. Picking the weakest of K candidates leaves
// W = sigma^2 + Exp(lambda) with lambda = K / P_m. The SINR is y = X / W.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "oso/random.hpp"

namespace oso::closedform {

struct AnalysisParams {
  std::size_t m_antennas = 4;
  std::size_t k_devices = 1;
  double p_signal = 1.0;   // P
  double p_interf = 1.0;   // P_m, mean residual power of one MTD
  double noise = 1.0;      // sigma^2

  // lambda = K / P_m.
  double lambda_int() const {
    return static_cast<double>(k_devices) / p_interf;
  }
  void validate() const;
};

struct DistributionCurve {
  std::vector<double> grid;
  std::vector<double> values;
};

// Gamma(s, x) for integer s >= 1: (s-1)! e^{-x} sum_{k<s} x^k / k!.
double upper_inc_gamma(int s, double x);

// Minimum of k i.i.d. exponentials with the given per-device rate:
// F(y) = 1 - exp(-rate k y).
double min_interference_cdf(double y, double per_device_rate, std::size_t k);
double min_interference_pdf(double y, double per_device_rate, std::size_t k);
// Same law with rate 1/P_m and K from params, i.e. aggregate rate lambda_int.
double min_interference_cdf(double y, const AnalysisParams& params);
double min_interference_pdf(double y, const AnalysisParams& params);

// f_y(y) = lambda e^{lambda sigma^2} / (P^M Gamma(M)) * y^{M-1} /
//          (lambda + y/P)^{M+1} * Gamma(M+1, (lambda + y/P) sigma^2).
double sinr_pdf(double y, const AnalysisParams& params);

// F_y(beta) = 1 - sum_{k<M} lambda e^{lambda sigma^2} beta^k /
//             (P^k k! (lambda + beta/P)^{k+1}) Gamma(k+1, (lambda + beta/P) sigma^2).
double outage_probability(double beta, const AnalysisParams& params);

// Fraction of i.i.d. Rayleigh snapshots whose oracle-selected SINR
// P |h_c|^2 / (P_m min_k |w.h_k|^2 + sigma^2) is at or below each threshold.
// Trials are split into fixed chunks, each drawing from
// rng.substream(chunk), so the result does not depend on `threads`.
std::vector<double> outage_monte_carlo(const AnalysisParams& params,
                                       std::span<const double> thresholds,
                                       std::size_t trials, const RandomStream& rng,
                                       unsigned threads = 1);

DistributionCurve tabulate(const std::function<double(double)>& f,
                           std::span<const double> grid);

}  // namespace oso::closedform
