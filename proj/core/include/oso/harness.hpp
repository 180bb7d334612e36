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

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "oso/airlink.hpp"
#include "oso/banditcore.hpp"
#include "oso/chanmodel.hpp"
#include "oso/config.hpp"
#include "oso/random.hpp"

namespace oso::harness {

// Top-level substream ids under the master seed.
enum class Stream : std::uint64_t {
  kPlacement = 1,
  kMtdLargeScale = 2,
  kHtd = 3,
  kMtdChannel = 4,
  kPolicy = 5,
  kMonteCarlo = 6,
  kOutage = 7,
  kInterference = 8,
  kDiagnostics = 9,
};

RandomStream stream(const RandomStream& root, Stream id);

/// Fixed MTD population: positions, large-scale gains, transmit powers and
/// the one-ring covariance of each MTD-to-BS link.
struct MtdPopulation {
  airlink::Point mta;
  std::vector<airlink::Point> positions;
  std::vector<double> aoa;          // radians, seen from the BS
  std::vector<double> gain;         // linear, includes shadowing
  std::vector<double> mta_distance_km;
  std::vector<double> power;        // W
  std::vector<chanmodel::ChannelSampler> samplers;

  std::size_t size() const { return positions.size(); }
};

// Places the MTA and k MTDs. `placement` drives positions, `large_scale`
// the per-device shadowing via large_scale.substream(k).
MtdPopulation place_mtds(const ExperimentConfig& cfg, std::size_t k, RandomStream& placement,
                         const RandomStream& large_scale);

/// One coherence interval as seen by the HTD link.
struct HtdSnapshot {
  airlink::Point position;
  double aoa = 0.0;
  double gain = 0.0;
  double p_c = 0.0;  // set so the mean interference-free SINR meets the target
  chanmodel::ChannelVector h_c;
  airlink::Beamformer w;
};

HtdSnapshot draw_htd(const ExperimentConfig& cfg, RandomStream& rng);

/// Contexts and the full reward matrix of an episode.
struct Dataset {
  std::size_t m_antennas = 0;
  Eigen::MatrixXd contexts;  // T x 2M
  Eigen::MatrixXd rewards;   // T x K, normalized rates in [0, 1]
  std::vector<std::size_t> optimal_arm;
  std::vector<double> optimal_reward;

  std::size_t horizon() const { return static_cast<std::size_t>(rewards.rows()); }
  std::size_t arms() const { return static_cast<std::size_t>(rewards.cols()); }
  bandit::ContextVector context(std::size_t t) const { return contexts.row(t).transpose(); }
  // Recomputes row optima; throws if rewards leave [0, 1] or optima disagree.
  void validate() const;
  void compute_optima();
};

Dataset generate_dataset(const ExperimentConfig& cfg, const RandomStream& rng);

/// Reads the reward matrix: always plays the row optimum.
class OraclePolicy : public bandit::Policy {
 public:
  explicit OraclePolicy(const Dataset& ds) : ds_(ds) {}
  std::string_view name() const override { return "oracle"; }
  std::size_t arms() const override { return ds_.arms(); }
  std::size_t select(std::size_t context_id, const bandit::ContextVector&,
                     RandomStream&) override {
    return ds_.optimal_arm.at(context_id);
  }

 private:
  const Dataset& ds_;
};

bandit::EpisodeTrace run_bandit(const Dataset& ds, bandit::Policy& policy, RandomStream& rng);

// Builds "linear", "uniform" or "oracle" for the dataset.
std::unique_ptr<bandit::Policy> make_policy(const std::string& name, const Dataset& ds,
                                            const ExperimentConfig& cfg);

struct SinrPoint {
  std::size_t k = 0;
  std::size_t trials = 0;
  double mean_sinr_db = 0.0;   // 10 log10 of the mean linear SINR
  double stderr_db = 0.0;      // delta-method standard error of the above
  double median_sinr_db = 0.0;
  double mean_mta_sinr_db = 0.0;
};

// Mean HTD SINR under oracle selection for each K. Each trial draws a fresh
// HTD, aggregator and max(k_list) MTDs and evaluates every K on the first K
// of them, so curves share random numbers across K.
std::vector<SinrPoint> mc_sinr_vs_k(const ExperimentConfig& cfg,
                                    std::span<const std::size_t> k_list, std::size_t trials,
                                    const RandomStream& rng);

struct OutagePoint {
  std::size_t k = 0;
  std::size_t trials = 0;
  double empirical = 0.0;
  double stderr_ = 0.0;
  double closed_form = 0.0;
};

// Outage of the oracle-selected i.i.d. Rayleigh link against the closed form,
// using cfg.analysis(k).
std::vector<OutagePoint> mc_outage_vs_k(const ExperimentConfig& cfg,
                                        std::span<const std::size_t> k_list,
                                        double threshold_db, std::size_t trials,
                                        const RandomStream& rng);

// min_k p |w.h_k|^2 over k i.i.d. Rayleigh interferers with MRC w, per trial.
std::vector<double> mc_oracle_interference(std::size_t m, std::size_t k, double p,
                                           std::size_t trials, const RandomStream& rng,
                                           unsigned threads = 1);

struct SummaryRow {
  std::string policy;
  std::size_t horizon = 0;
  double cumulative_reward = 0.0;
  double optimal_reward = 0.0;
  double ratio_to_optimal = 0.0;
  double final_regret = 0.0;

  bool operator==(const SummaryRow&) const = default;
};

std::vector<SummaryRow> report(std::span<const bandit::EpisodeTrace> traces);

// CSV writers and readers. Every file starts with a `#schema=` line.
void write_trace_csv(std::ostream& out, const bandit::EpisodeTrace& trace);
bandit::EpisodeTrace read_trace_csv(std::istream& in);
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);
std::vector<SummaryRow> read_summary_csv(std::istream& in);
void write_summary_table(std::ostream& out, std::span<const SummaryRow> rows);
void write_dataset_csv(std::ostream& out, const Dataset& ds);
Dataset read_dataset_csv(std::istream& in);
void write_sinr_csv(std::ostream& out, std::span<const SinrPoint> points,
                    airlink::MtdPowerMode mode);
void write_outage_csv(std::ostream& out, std::span<const OutagePoint> points, double threshold_db);
void write_curve_csv(std::ostream& out, const closedform::DistributionCurve& curve,
                     const std::string& kind);
// Column-major (row, col, re, im) listing of a complex matrix.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m, const std::string& kind,
                      bool with_header);

}  // namespace oso::harness
