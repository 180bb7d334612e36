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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "oso/airlink.hpp"
#include "oso/banditcore.hpp"
#include "oso/chanmodel.hpp"
#include "oso/closedform.hpp"

namespace oso::harness {

/// Every knob of an experiment. Defaults reproduce the reference LTE setup:
/// 4 antennas, 500 m cell, 250 m aggregator radius, 360 kHz at -174 dBm/Hz
/// with a 2 dB noise figure, 128.1 + 36.7 log10(d_km) path loss, 10 dB
/// shadowing, 10 degree angular spread, 10 dB HTD/MTD targets.
struct ExperimentConfig {
  // Array.
  std::vector<double> antenna_positions_m{-0.02, -0.01, 0.01, 0.02};  // y-axis
  double wavelength_m = 0.02;

  // Geometry.
  double cell_radius_m = 500.0;
  double mta_radius_m = 250.0;
  double mta_distance_m = 250.0;
  double min_distance_m = 35.0;
  double htd_aoa_max_deg = 60.0;

  // Propagation.
  double pathloss_intercept_db = 128.1;
  double pathloss_slope_db = 36.7;
  double shadowing_db = 10.0;
  double angular_spread_deg = 10.0;
  double mtd_angular_spread_deg = 10.0;

  // Link budget.
  double bandwidth_hz = 360e3;
  double noise_figure_db = 2.0;
  double noise_psd_dbm_hz = -174.0;
  double htd_target_sinr_db = 10.0;
  double mtd_target_snr_db = 10.0;
  airlink::MtdPowerMode power_mode = airlink::MtdPowerMode::kFixed;
  double mtd_power_dbm = 2.0;
  double max_mtd_power_dbm = 10.0;
  bool sic = true;

  // Bandit.
  std::size_t k_devices = 80;
  std::size_t horizon = 20000;
  double prior_lambda = 0.25;
  double prior_a0 = 6.0;
  double prior_b0 = 6.0;
  bool intercept = true;
  bool context_phase_reference = true;

  // Sweeps and execution.
  std::vector<std::size_t> k_list{10, 50, 100, 200};
  std::size_t trials = 100000;
  double outage_threshold_db = 10.0;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  std::size_t m_antennas() const { return antenna_positions_m.size(); }
  void validate() const;

  chanmodel::ArrayGeometry geometry() const;
  chanmodel::LargeScaleFading fading() const;
  double noise_power() const;
  // Power settings with p_c left at 1 W; callers scale p_c per snapshot.
  airlink::PowerConfig power() const;
  bandit::PriorConfig prior() const;
  // Normalized i.i.d. Rayleigh analysis parameters for k devices: noise 1,
  // P = target SINR / M, P_m = fixed MTD power * path gain at the aggregator
  // distance / noise.
  closedform::AnalysisParams analysis(std::size_t k) const;

  // Applies one `key = value` assignment. Unknown keys throw ConfigError.
  void set(std::string_view key, std::string_view value);
  std::vector<std::pair<std::string, std::string>> entries() const;
};

// Flat `key = value` text; '#' starts a comment; unknown keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
void write_config(std::ostream& out, const ExperimentConfig& cfg);

}  // namespace oso::harness
