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

// Uplink link budget for one cellular user (HTD) received by an M-antenna
// base station while one machine-type device (MTD) reuses the resource block
// and transmits to a single-antenna aggregator (MTA).
//
// A beamformer w is applied as the plain product w.h = sum_i w_i h_i (no
// conjugation), so MRC is w = conj(h_c) / |h_c|.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "oso/chanmodel.hpp"

namespace oso::airlink {

using chanmodel::ChannelVector;

struct Beamformer {
  Eigen::VectorXcd weights;

  std::size_t size() const { return static_cast<std::size_t>(weights.size()); }
  std::complex<double> apply(const ChannelVector& h) const;
  double norm_squared() const { return weights.squaredNorm(); }
};

enum class MtdPowerMode { kFixed, kTargetSnr };

struct PowerConfig {
  double p_c = 1.0;        // HTD transmit power, W
  MtdPowerMode p_k_mode = MtdPowerMode::kFixed;
  double p_k = 1e-3;       // fixed MTD power, W
  double target_snr = 10.0;  // linear SNR target at the MTA (target mode)
  double n0 = 1e-13;       // noise power per resource block, W
  double max_p_k = 1e-2;   // cap for power control, W
  bool sic = true;         // MTA cancels the HTD signal

  void validate() const;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b);

struct NodePlacement {
  Point bs;
  Point mta;
  Point htd;
  std::vector<Point> mtds;
  double cell_radius = 500.0;  // m
  double mta_radius = 250.0;   // m

  std::size_t k() const { return mtds.size(); }
  void validate() const;
};

struct SnapshotChannels {
  ChannelVector h_c;
  std::vector<ChannelVector> h_kb;
  std::vector<std::complex<double>> h_k;
  std::complex<double> h_cm{0.0, 0.0};

  void validate(std::size_t m) const;
};

// w = conj(h_c) / |h_c|.
Beamformer mrc(const ChannelVector& h_c);

// P_c |w.h_c|^2 / (p_k |w.h_kb|^2 + |w|^2 N_0).
double sinr_htd(const Beamformer& w, const ChannelVector& h_c, const ChannelVector& h_kb,
                const PowerConfig& pw, double p_k);

// p_k |h_k|^2 / (P_c |h_cm|^2 + N_0); the P_c term is dropped when pw.sic.
double sinr_mta(std::complex<double> h_k, std::complex<double> h_cm, const PowerConfig& pw,
                double p_k);

// |w.h_kb|^2.
double residual_interference(const Beamformer& w, const ChannelVector& h_kb);

// argmin_k p_k[k] |w.h_kb[k]|^2, lowest index on ties.
std::size_t oracle_select(const Beamformer& w, std::span<const ChannelVector> h_kb,
                          std::span<const double> p_k);

// min(max_p_k, target_snr * N_0 / mean_gain(d)), using only the path-loss
// part of the gain.
double power_control(double d_to_mta_km, const chanmodel::LargeScaleFading& fading,
                     const PowerConfig& pw);

// log2(1 + gamma) / log2(1 + gamma_ref), clipped to [0, 1].
double normalized_rate(double gamma, double gamma_ref);

// P_c |h_c|^2 / N_0: the MRC SINR with no MTD on the resource block.
double interference_free_sinr(const ChannelVector& h_c, const PowerConfig& pw);

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watts(double dbm);
// Thermal noise over a band: psd (dBm/Hz) + 10 log10(bandwidth) + noise figure.
double noise_power_watts(double psd_dbm_hz, double bandwidth_hz, double noise_figure_db);

}  // namespace oso::airlink
