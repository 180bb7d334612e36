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

#include "oso/harness.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "oso/closedform.hpp"
#include "oso/errors.hpp"
#include "oso/parallel.hpp"

namespace oso::harness {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr std::size_t kTrialsPerChunk = 4096;
constexpr int kMaxPlacementAttempts = 10000;

double wrap_angle(double a) {
  // atan2 returns (-pi, pi]; rings want [-pi, pi).
  return a >= std::numbers::pi ? a - 2.0 * std::numbers::pi : a;
}

airlink::Beamformer phase_referenced(airlink::Beamformer w) {
  const double mag = std::abs(w.weights(0));
  if (mag > 0.0) w.weights *= std::conj(w.weights(0)) / mag;
  return w;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  std::nth_element(v.begin(), v.begin() + n / 2, v.end());
  const double upper = v[n / 2];
  if (n % 2) return upper;
  return 0.5 * (upper + *std::max_element(v.begin(), v.begin() + n / 2));
}

}  // namespace

RandomStream stream(const RandomStream& root, Stream id) {
  return root.substream(static_cast<std::uint64_t>(id));
}

MtdPopulation place_mtds(const ExperimentConfig& cfg, std::size_t k, RandomStream& placement,
                         const RandomStream& large_scale) {
  if (k < 1) throw DomainError("need at least one MTD");
  const chanmodel::LargeScaleFading fading = cfg.fading();
  const chanmodel::ArrayGeometry geom = cfg.geometry();
  airlink::PowerConfig pw = cfg.power();
  const double sector = cfg.htd_aoa_max_deg * kDegToRad;

  MtdPopulation pop;
  const double mta_angle = placement.uniform(-sector, sector);
  pop.mta = {cfg.mta_distance_m * std::cos(mta_angle), cfg.mta_distance_m * std::sin(mta_angle)};
  const airlink::Point bs{};

  for (std::size_t i = 0; i < k; ++i) {
    airlink::Point p;
    int attempts = 0;
    for (;; ++attempts) {
      if (attempts == kMaxPlacementAttempts) throw NumericalError("MTD placement failed");
      const double r = cfg.mta_radius_m * std::sqrt(placement.uniform());
      const double phi = placement.uniform(-std::numbers::pi, std::numbers::pi);
      p = {pop.mta.x + r * std::cos(phi), pop.mta.y + r * std::sin(phi)};
      const double d_bs = airlink::distance(bs, p);
      if (d_bs >= cfg.min_distance_m && d_bs <= cfg.cell_radius_m &&
          airlink::distance(pop.mta, p) >= cfg.min_distance_m) {
        break;
      }
    }
    pop.positions.push_back(p);
    const double aoa = wrap_angle(std::atan2(p.y, p.x));
    pop.aoa.push_back(aoa);

    RandomStream shadow = large_scale.substream(i);
    const double gain = chanmodel::large_scale_gain(airlink::distance(bs, p) / 1000.0, fading, shadow);
    pop.gain.push_back(gain);

    const double d_mta_km = airlink::distance(pop.mta, p) / 1000.0;
    pop.mta_distance_km.push_back(d_mta_km);
    pop.power.push_back(cfg.power_mode == airlink::MtdPowerMode::kFixed
                            ? pw.p_k
                            : airlink::power_control(d_mta_km, fading, pw));

    const chanmodel::RingScatter ring{aoa, cfg.mtd_angular_spread_deg * kDegToRad, gain};
    pop.samplers.emplace_back(chanmodel::covariance(geom, ring));
  }
  return pop;
}

HtdSnapshot draw_htd(const ExperimentConfig& cfg, RandomStream& rng) {
  HtdSnapshot s;
  const double rmin2 = cfg.min_distance_m * cfg.min_distance_m;
  const double rmax2 = cfg.cell_radius_m * cfg.cell_radius_m;
  const double r = std::sqrt(rmin2 + rng.uniform() * (rmax2 - rmin2));
  const double sector = cfg.htd_aoa_max_deg * kDegToRad;
  s.aoa = rng.uniform(-sector, sector);
  s.position = {r * std::cos(s.aoa), r * std::sin(s.aoa)};
  s.gain = chanmodel::large_scale_gain(r / 1000.0, cfg.fading(), rng);
  s.p_c = airlink::db_to_linear(cfg.htd_target_sinr_db) * cfg.noise_power() /
          (static_cast<double>(cfg.m_antennas()) * s.gain);
  const chanmodel::RingScatter ring{s.aoa, cfg.angular_spread_deg * kDegToRad, s.gain};
  s.h_c = chanmodel::sample_channel(chanmodel::covariance(cfg.geometry(), ring), rng);
  s.w = airlink::mrc(s.h_c);
  if (cfg.context_phase_reference) s.w = phase_referenced(s.w);
  return s;
}

void Dataset::compute_optima() {
  const std::size_t t_max = horizon();
  optimal_arm.assign(t_max, 0);
  optimal_reward.assign(t_max, 0.0);
  for (std::size_t t = 0; t < t_max; ++t) {
    Eigen::Index best = 0;
    optimal_reward[t] = rewards.row(static_cast<Eigen::Index>(t)).maxCoeff(&best);
    optimal_arm[t] = static_cast<std::size_t>(best);
  }
}

void Dataset::validate() const {
  const std::size_t t_max = horizon();
  if (arms() < 1 || t_max < 1) throw DomainError("dataset is empty");
  if (static_cast<std::size_t>(contexts.rows()) != t_max || contexts.cols() < 1) {
    throw DomainError("dataset contexts do not match the reward rows");
  }
  if (optimal_arm.size() != t_max || optimal_reward.size() != t_max) {
    throw DomainError("dataset optima have the wrong length");
  }
  if (!contexts.allFinite()) throw DomainError("dataset contexts must be finite");
  for (std::size_t t = 0; t < t_max; ++t) {
    std::size_t best = 0;
    for (std::size_t k = 0; k < arms(); ++k) {
      const double r = rewards(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k));
      if (!(r >= 0.0 && r <= 1.0)) throw DomainError("dataset reward outside [0, 1]");
      if (r > rewards(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(best))) best = k;
    }
    if (optimal_arm[t] != best ||
        optimal_reward[t] != rewards(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(best))) {
      throw DomainError("dataset optimum disagrees with the reward row at step " +
                        std::to_string(t));
    }
  }
}

Dataset generate_dataset(const ExperimentConfig& cfg, const RandomStream& rng) {
  cfg.validate();
  const std::size_t t_max = cfg.horizon;
  const std::size_t k_max = cfg.k_devices;
  const std::size_t m = cfg.m_antennas();

  RandomStream placement = stream(rng, Stream::kPlacement);
  const MtdPopulation pop = place_mtds(cfg, k_max, placement, stream(rng, Stream::kMtdLargeScale));
  const RandomStream htd_root = stream(rng, Stream::kHtd);
  const RandomStream channel_root = stream(rng, Stream::kMtdChannel);

  Dataset ds;
  ds.m_antennas = m;
  ds.contexts.resize(static_cast<Eigen::Index>(t_max), static_cast<Eigen::Index>(2 * m));
  ds.rewards.resize(static_cast<Eigen::Index>(t_max), static_cast<Eigen::Index>(k_max));

  parallel_for(t_max, cfg.threads, [&](std::size_t t) {
    const auto row = static_cast<Eigen::Index>(t);
    RandomStream htd_rng = htd_root.substream(t);
    const HtdSnapshot s = draw_htd(cfg, htd_rng);
    airlink::PowerConfig pw = cfg.power();
    pw.p_c = s.p_c;
    const double reference = airlink::interference_free_sinr(s.h_c, pw);
    RandomStream channel_rng = channel_root.substream(t);
    for (std::size_t k = 0; k < k_max; ++k) {
      const chanmodel::ChannelVector h = pop.samplers[k].draw(channel_rng);
      const double sinr = airlink::sinr_htd(s.w, s.h_c, h, pw, pop.power[k]);
      ds.rewards(row, static_cast<Eigen::Index>(k)) = airlink::normalized_rate(sinr, reference);
    }
    ds.contexts.row(row) = bandit::build_context(s.w).transpose();
  });
  ds.compute_optima();
  return ds;
}

bandit::EpisodeTrace run_bandit(const Dataset& ds, bandit::Policy& policy, RandomStream& rng) {
  if (policy.arms() != ds.arms()) throw DomainError("policy arm count does not match dataset");
  const std::size_t t_max = ds.horizon();
  const std::size_t warmup = policy.round_robin_warmup() ? ds.arms() : 0;
  if (t_max < warmup) throw DomainError("horizon shorter than the round-robin prefix");

  bandit::EpisodeTrace trace;
  trace.policy = std::string(policy.name());
  trace.steps.reserve(t_max);
  for (std::size_t t = 0; t < t_max; ++t) {
    const bandit::ContextVector q = ds.context(t);
    const std::size_t arm = t < warmup ? t : policy.select(t, q, rng);
    if (arm >= ds.arms()) throw DomainError("policy chose an arm out of range");
    const double r = ds.rewards(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(arm));
    policy.observe(q, arm, r);
    trace.steps.push_back({t, t, arm, r, ds.optimal_reward[t]});
  }
  return trace;
}

std::unique_ptr<bandit::Policy> make_policy(const std::string& name, const Dataset& ds,
                                            const ExperimentConfig& cfg) {
  if (name == "linear") {
    return std::make_unique<bandit::LinearThompsonPolicy>(
        ds.arms(), static_cast<std::size_t>(ds.contexts.cols()), cfg.prior());
  }
  if (name == "uniform") return std::make_unique<bandit::UniformPolicy>(ds.arms());
  if (name == "oracle") return std::make_unique<OraclePolicy>(ds);
  throw ConfigError("unknown policy '" + name + "' (expected linear, uniform or oracle)");
}

std::vector<SinrPoint> mc_sinr_vs_k(const ExperimentConfig& cfg,
                                    std::span<const std::size_t> k_list, std::size_t trials,
                                    const RandomStream& rng) {
  cfg.validate();
  if (k_list.empty()) throw DomainError("k_list is empty");
  if (trials < 1) throw DomainError("need at least one trial");
  const std::size_t k_max = *std::max_element(k_list.begin(), k_list.end());
  if (k_list.front() < 1) throw DomainError("k_list entries must be positive");
  const std::size_t n_k = k_list.size();
  const chanmodel::LargeScaleFading fading = cfg.fading();

  // Row-major trials x n_k.
  std::vector<double> htd(trials * n_k);
  std::vector<double> mta(trials * n_k);
  const std::size_t chunks = (trials + kTrialsPerChunk - 1) / kTrialsPerChunk;
  parallel_for(chunks, cfg.threads, [&](std::size_t chunk) {
    const std::size_t end = std::min(trials, (chunk + 1) * kTrialsPerChunk);
    for (std::size_t trial = chunk * kTrialsPerChunk; trial < end; ++trial) {
      const RandomStream root = rng.substream(trial);
      RandomStream htd_rng = root.substream(1);
      const HtdSnapshot s = draw_htd(cfg, htd_rng);
      RandomStream placement = root.substream(2);
      const MtdPopulation pop = place_mtds(cfg, k_max, placement, root.substream(3));
      RandomStream channel_rng = root.substream(4);
      airlink::PowerConfig pw = cfg.power();
      pw.p_c = s.p_c;

      std::vector<double> interference(k_max);
      std::vector<double> mta_snr(k_max);
      for (std::size_t k = 0; k < k_max; ++k) {
        const chanmodel::ChannelVector h = pop.samplers[k].draw(channel_rng);
        interference[k] = pop.power[k] * airlink::residual_interference(s.w, h);
        const std::complex<double> h_k =
            std::sqrt(fading.mean_gain(pop.mta_distance_km[k])) * channel_rng.complex_normal();
        mta_snr[k] = airlink::sinr_mta(h_k, {0.0, 0.0}, pw, pop.power[k]);
      }
      const double signal = pw.p_c * std::norm(s.w.apply(s.h_c));
      const double noise = s.w.norm_squared() * pw.n0;
      // Running minimum over the nested prefixes, lowest index on ties.
      std::size_t best = 0;
      std::vector<std::size_t> best_for(k_max + 1, 0);
      for (std::size_t k = 1; k <= k_max; ++k) {
        if (k > 1 && interference[k - 1] < interference[best]) best = k - 1;
        best_for[k] = best;
      }
      for (std::size_t i = 0; i < n_k; ++i) {
        const std::size_t pick = best_for[k_list[i]];
        htd[trial * n_k + i] = signal / (interference[pick] + noise);
        mta[trial * n_k + i] = mta_snr[pick];
      }
    }
  });

  std::vector<SinrPoint> out;
  const double n = static_cast<double>(trials);
  for (std::size_t i = 0; i < n_k; ++i) {
    std::vector<double> col(trials);
    std::vector<double> mta_col(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      col[t] = htd[t * n_k + i];
      mta_col[t] = mta[t * n_k + i];
    }
    const double mean = mean_of(col);
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);
    const double sd = trials > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    SinrPoint p;
    p.k = k_list[i];
    p.trials = trials;
    p.mean_sinr_db = airlink::linear_to_db(mean);
    p.stderr_db = 10.0 / std::numbers::ln10 * (sd / std::sqrt(n)) / mean;
    p.median_sinr_db = airlink::linear_to_db(median_of(col));
    p.mean_mta_sinr_db = airlink::linear_to_db(mean_of(mta_col));
    out.push_back(p);
  }
  return out;
}

std::vector<OutagePoint> mc_outage_vs_k(const ExperimentConfig& cfg,
                                        std::span<const std::size_t> k_list,
                                        double threshold_db, std::size_t trials,
                                        const RandomStream& rng) {
  cfg.validate();
  const double beta = airlink::db_to_linear(threshold_db);
  std::vector<OutagePoint> out;
  for (std::size_t k : k_list) {
    const closedform::AnalysisParams params = cfg.analysis(k);
    const double thresholds[] = {beta};
    const double p = closedform::outage_monte_carlo(params, thresholds, trials, rng.substream(k),
                                                    cfg.threads)[0];
    OutagePoint point;
    point.k = k;
    point.trials = trials;
    point.empirical = p;
    point.stderr_ = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    point.closed_form = closedform::outage_probability(beta, params);
    out.push_back(point);
  }
  return out;
}

std::vector<double> mc_oracle_interference(std::size_t m, std::size_t k, double p,
                                           std::size_t trials, const RandomStream& rng,
                                           unsigned threads) {
  if (m < 1 || k < 1) throw DomainError("need at least one antenna and one MTD");
  if (!(p >= 0.0)) throw DomainError("interferer power must be non-negative");
  std::vector<double> out(trials);
  const std::size_t chunks = (trials + kTrialsPerChunk - 1) / kTrialsPerChunk;
  parallel_for(chunks, threads, [&](std::size_t chunk) {
    RandomStream s = rng.substream(chunk);
    const std::size_t end = std::min(trials, (chunk + 1) * kTrialsPerChunk);
    for (std::size_t trial = chunk * kTrialsPerChunk; trial < end; ++trial) {
      const airlink::Beamformer w = airlink::mrc(chanmodel::sample_rayleigh(m, s));
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < k; ++i) {
        best = std::min(best, airlink::residual_interference(w, chanmodel::sample_rayleigh(m, s)));
      }
      out[trial] = p * best;
    }
  });
  return out;
}

std::vector<SummaryRow> report(std::span<const bandit::EpisodeTrace> traces) {
  std::vector<SummaryRow> rows;
  for (const auto& trace : traces) {
    SummaryRow row;
    row.policy = trace.policy;
    row.horizon = trace.horizon();
    row.cumulative_reward = trace.cumulative_reward();
    row.optimal_reward = trace.cumulative_optimal();
    row.ratio_to_optimal = row.optimal_reward > 0.0 ? row.cumulative_reward / row.optimal_reward : 0.0;
    const std::vector<double> regret = bandit::cumulative_regret(trace);
    row.final_regret = regret.empty() ? 0.0 : regret.back();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace oso::harness
