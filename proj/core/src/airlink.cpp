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

#include "oso/airlink.hpp"

#include <algorithm>
#include <cmath>

#include "oso/errors.hpp"

namespace oso::airlink {

std::complex<double> Beamformer::apply(const ChannelVector& h) const {
  if (h.size() != weights.size()) throw DomainError("beamformer/channel size mismatch");
  return (weights.array() * h.array()).sum();
}

void PowerConfig::validate() const {
  if (!(p_c > 0.0)) throw DomainError("HTD power must be positive");
  if (!(n0 > 0.0)) throw DomainError("noise power must be positive");
  if (!(max_p_k > 0.0)) throw DomainError("MTD power cap must be positive");
  if (p_k_mode == MtdPowerMode::kFixed && !(p_k >= 0.0)) {
    throw DomainError("fixed MTD power must be non-negative");
  }
  if (!std::isfinite(target_snr) || !(target_snr > 0.0)) {
    throw DomainError("MTD target SNR must be positive and finite");
  }
}

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void NodePlacement::validate() const {
  if (mtds.empty()) throw DomainError("placement needs at least one MTD");
  auto in_range = [](double d, double radius) { return d > 0.0 && d <= radius; };
  if (!in_range(distance(bs, htd), cell_radius)) throw DomainError("HTD outside the cell");
  if (!in_range(distance(bs, mta), cell_radius)) throw DomainError("MTA outside the cell");
  for (const Point& p : mtds) {
    if (!in_range(distance(bs, p), cell_radius)) throw DomainError("MTD outside the cell");
    if (!in_range(distance(mta, p), mta_radius)) {
      throw DomainError("MTD outside the aggregator radius");
    }
  }
}

void SnapshotChannels::validate(std::size_t m) const {
  if (static_cast<std::size_t>(h_c.size()) != m) throw DomainError("h_c has wrong length");
  if (h_kb.size() != h_k.size()) throw DomainError("MTD channel counts disagree");
  for (const auto& h : h_kb) {
    if (static_cast<std::size_t>(h.size()) != m) throw DomainError("h_kb has wrong length");
  }
}

Beamformer mrc(const ChannelVector& h_c) {
  const double norm = h_c.norm();
  if (!(norm > 0.0)) throw DegenerateInputError("MRC of a zero channel");
  return Beamformer{h_c.conjugate() / norm};
}

double residual_interference(const Beamformer& w, const ChannelVector& h_kb) {
  return std::norm(w.apply(h_kb));
}

double sinr_htd(const Beamformer& w, const ChannelVector& h_c, const ChannelVector& h_kb,
                const PowerConfig& pw, double p_k) {
  const double signal = pw.p_c * std::norm(w.apply(h_c));
  const double interference = p_k * residual_interference(w, h_kb);
  return signal / (interference + w.norm_squared() * pw.n0);
}

double sinr_mta(std::complex<double> h_k, std::complex<double> h_cm, const PowerConfig& pw,
                double p_k) {
  const double htd = pw.sic ? 0.0 : pw.p_c * std::norm(h_cm);
  return p_k * std::norm(h_k) / (htd + pw.n0);
}

std::size_t oracle_select(const Beamformer& w, std::span<const ChannelVector> h_kb,
                          std::span<const double> p_k) {
  if (h_kb.empty()) throw DomainError("oracle selection needs at least one MTD");
  if (h_kb.size() != p_k.size()) throw DomainError("one power per MTD required");
  std::size_t best = 0;
  double best_value = p_k[0] * residual_interference(w, h_kb[0]);
  for (std::size_t k = 1; k < h_kb.size(); ++k) {
    const double value = p_k[k] * residual_interference(w, h_kb[k]);
    if (value < best_value) {
      best_value = value;
      best = k;
    }
  }
  return best;
}

double power_control(double d_to_mta_km, const chanmodel::LargeScaleFading& fading,
                     const PowerConfig& pw) {
  const double gain = fading.mean_gain(d_to_mta_km);  // throws on d <= 0
  return std::min(pw.max_p_k, pw.target_snr * pw.n0 / gain);
}

double normalized_rate(double gamma, double gamma_ref) {
  if (!(gamma >= 0.0)) throw DomainError("SINR must be non-negative");
  if (!(gamma_ref > 0.0)) throw DomainError("reference SINR must be positive");
  const double ratio = std::log1p(gamma) / std::log1p(gamma_ref);
  return std::clamp(ratio, 0.0, 1.0);
}

double interference_free_sinr(const ChannelVector& h_c, const PowerConfig& pw) {
  return pw.p_c * h_c.squaredNorm() / pw.n0;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double noise_power_watts(double psd_dbm_hz, double bandwidth_hz, double noise_figure_db) {
  return dbm_to_watts(psd_dbm_hz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
}

}  // namespace oso::airlink
