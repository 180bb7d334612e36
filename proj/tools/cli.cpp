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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "oso/closedform.hpp"
#include "oso/config.hpp"
#include "oso/errors.hpp"
#include "oso/harness.hpp"
#include "oso/random.hpp"

namespace oso::cli {
namespace {

using harness::ExperimentConfig;

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string out_path = "-";

  ExperimentConfig config() const {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : harness::load_config(config_path);
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      cfg.set(std::string_view(kv).substr(0, eq), std::string_view(kv).substr(eq + 1));
    }
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    return cfg;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "key = value config file")->check(CLI::ExistingFile);
  cmd->add_option("--set", c.overrides, "override a config key, key=value (repeatable)");
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--threads", c.threads, "worker threads for Monte Carlo and dataset generation")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out_path, "output CSV path, '-' for stdout");
}

// Writes through a string buffer so a failed run leaves no partial file.
void emit(const std::string& path, std::ostream& out,
          const std::function<void(std::ostream&)>& write) {
  std::ostringstream buffer;
  write(buffer);
  if (path.empty() || path == "-") {
    out << buffer.str();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("cannot open '" + path + "' for writing");
  file << buffer.str();
  if (!file) throw ConfigError("failed writing '" + path + "'");
}

std::vector<double> db_grid(double lo_db, double hi_db, std::size_t points) {
  if (points < 2) throw ConfigError("grid needs at least 2 points");
  if (!(hi_db > lo_db)) throw ConfigError("grid maximum must exceed the minimum");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double db = lo_db + (hi_db - lo_db) * static_cast<double>(i) / static_cast<double>(points - 1);
    grid[i] = airlink::db_to_linear(db);
  }
  return grid;
}

harness::Dataset load_or_generate(const std::string& dataset_path, const ExperimentConfig& cfg) {
  if (dataset_path.empty()) return harness::generate_dataset(cfg, RandomStream(cfg.seed));
  std::ifstream in(dataset_path);
  if (!in) throw ConfigError("cannot open dataset '" + dataset_path + "'");
  return harness::read_dataset_csv(in);
}

bandit::EpisodeTrace run_policy(const std::string& name, const harness::Dataset& ds,
                                const ExperimentConfig& cfg) {
  auto policy = harness::make_policy(name, ds, cfg);
  RandomStream rng = harness::stream(RandomStream(cfg.seed), harness::Stream::kPolicy);
  return harness::run_bandit(ds, *policy, rng);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Opportunistic spectrum sharing: channel models, closed-form analysis, "
               "Monte Carlo sweeps and contextual bandit scheduling",
               "oso"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "expand all subcommand help");

  // channels
  Common channels_opts;
  double ch_aoa_deg = 0.0;
  double ch_spread_deg = 10.0;
  double ch_gain = 1.0;
  std::size_t ch_samples = 0;
  auto* channels = app.add_subcommand("channels", "one-ring covariance and channel samples");
  add_common(channels, channels_opts);
  channels->add_option("--aoa-deg", ch_aoa_deg, "nominal angle of arrival, degrees");
  channels->add_option("--spread-deg", ch_spread_deg, "angular spread half-width, degrees");
  channels->add_option("--gain", ch_gain, "mean gain (linear)");
  channels->add_option("--samples", ch_samples, "number of channel draws to append");

  // analyze
  Common analyze_opts;
  bool an_pdf = false;
  bool an_outage = false;
  std::size_t an_k = 100;
  double an_min_db = -10.0;
  double an_max_db = 30.0;
  std::size_t an_points = 81;
  auto* analyze = app.add_subcommand("analyze", "closed-form SINR density and outage curves");
  add_common(analyze, analyze_opts);
  auto* pdf_flag = analyze->add_flag("--pdf", an_pdf, "SINR density");
  auto* outage_flag = analyze->add_flag("--outage", an_outage, "outage probability");
  pdf_flag->excludes(outage_flag);
  analyze->add_option("--k", an_k, "number of MTDs")->check(CLI::PositiveNumber);
  analyze->add_option("--grid-min-db", an_min_db, "first grid point, dB");
  analyze->add_option("--grid-max-db", an_max_db, "last grid point, dB");
  analyze->add_option("--grid-points", an_points, "grid size (log-spaced)");

  // mc
  Common mc_opts;
  std::string mc_mode;
  std::vector<std::size_t> mc_k_list;
  std::optional<std::size_t> mc_trials;
  bool mc_outage = false;
  std::optional<double> mc_threshold_db;
  auto* mc = app.add_subcommand("mc", "Monte Carlo SINR or outage sweeps over K");
  add_common(mc, mc_opts);
  mc->add_option("--mode", mc_mode, "MTD power mode")->check(CLI::IsMember({"fixed", "powerctl"}));
  mc->add_option("--k-list", mc_k_list, "comma-separated MTD counts")->delimiter(',');
  mc->add_option("--trials", mc_trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  mc->add_flag("--outage", mc_outage, "i.i.d. Rayleigh outage against the closed form");
  mc->add_option("--threshold-db", mc_threshold_db, "outage SINR threshold, dB");

  // dataset
  Common ds_opts;
  std::optional<std::size_t> ds_horizon;
  std::optional<std::size_t> ds_k;
  auto* dataset = app.add_subcommand("dataset", "generate a bandit dataset");
  add_common(dataset, ds_opts);
  dataset->add_option("--horizon", ds_horizon, "steps (coherence intervals)");
  dataset->add_option("--k", ds_k, "number of MTDs (arms)");

  // bandit
  Common bandit_opts;
  std::string policy_name = "linear";
  std::optional<std::size_t> bandit_horizon;
  std::string bandit_dataset;
  std::string state_out;
  auto* bandit_cmd = app.add_subcommand("bandit", "run one policy and write its trace");
  add_common(bandit_cmd, bandit_opts);
  bandit_cmd->add_option("--policy", policy_name, "policy")
      ->check(CLI::IsMember({"linear", "uniform", "oracle"}));
  bandit_cmd->add_option("--horizon", bandit_horizon, "steps");
  bandit_cmd->add_option("--dataset", bandit_dataset, "read the dataset from a CSV file")
      ->check(CLI::ExistingFile);
  bandit_cmd->add_option("--state-out", state_out, "save the linear policy state");

  // report
  Common report_opts;
  std::vector<std::string> report_traces;
  std::optional<std::size_t> report_horizon;
  std::string report_dataset;
  bool report_table = false;
  auto* report = app.add_subcommand(
      "report", "cumulative-reward summary from trace files, or of all policies on one dataset");
  add_common(report, report_opts);
  report->add_option("--trace", report_traces, "trace CSV (repeatable)")->check(CLI::ExistingFile);
  report->add_option("--horizon", report_horizon, "steps when running policies");
  report->add_option("--dataset", report_dataset, "read the dataset from a CSV file")
      ->check(CLI::ExistingFile);
  report->add_flag("--table", report_table, "aligned text table instead of CSV");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "oso: error: " << e.what() << " (see --help)\n";
    return e.get_exit_code();
  }

  try {
    if (*channels) {
      const ExperimentConfig cfg = channels_opts.config();
      cfg.validate();
      constexpr double kDeg = std::numbers::pi / 180.0;
      chanmodel::RingScatter ring{ch_aoa_deg * kDeg, ch_spread_deg * kDeg, ch_gain};
      if (ring.nominal_aoa >= std::numbers::pi) ring.nominal_aoa -= 2.0 * std::numbers::pi;
      const chanmodel::CovarianceMatrix r = chanmodel::covariance(cfg.geometry(), ring);
      const chanmodel::ChannelSampler sampler(r);
      RandomStream rng = harness::stream(RandomStream(cfg.seed), harness::Stream::kDiagnostics);
      Eigen::MatrixXcd draws(r.rows(), static_cast<Eigen::Index>(ch_samples));
      for (Eigen::Index i = 0; i < draws.cols(); ++i) draws.col(i) = sampler.draw(rng);
      emit(channels_opts.out_path, out, [&](std::ostream& os) {
        harness::write_matrix_csv(os, r, "covariance", true);
        harness::write_matrix_csv(os, draws, "sample", false);
      });
    } else if (*analyze) {
      if (an_pdf == an_outage) throw ConfigError("analyze needs exactly one of --pdf or --outage");
      const ExperimentConfig cfg = analyze_opts.config();
      cfg.validate();
      const closedform::AnalysisParams params = cfg.analysis(an_k);
      const std::vector<double> grid = db_grid(an_min_db, an_max_db, an_points);
      const closedform::DistributionCurve curve =
          an_pdf ? closedform::tabulate(
                       [&](double y) { return closedform::sinr_pdf(y, params); }, grid)
                 : closedform::tabulate(
                       [&](double b) { return closedform::outage_probability(b, params); }, grid);
      emit(analyze_opts.out_path, out, [&](std::ostream& os) {
        harness::write_curve_csv(os, curve, an_pdf ? "sinr_pdf" : "outage");
      });
    } else if (*mc) {
      ExperimentConfig cfg = mc_opts.config();
      if (!mc_mode.empty()) cfg.set("power_mode", mc_mode);
      if (!mc_k_list.empty()) cfg.k_list = mc_k_list;
      if (mc_trials) cfg.trials = *mc_trials;
      if (mc_threshold_db) cfg.outage_threshold_db = *mc_threshold_db;
      cfg.validate();
      if (cfg.k_list.empty()) throw ConfigError("k_list is empty");
      const RandomStream root(cfg.seed);
      if (mc_outage) {
        const auto points =
            harness::mc_outage_vs_k(cfg, cfg.k_list, cfg.outage_threshold_db, cfg.trials,
                                    harness::stream(root, harness::Stream::kOutage));
        emit(mc_opts.out_path, out, [&](std::ostream& os) {
          harness::write_outage_csv(os, points, cfg.outage_threshold_db);
        });
      } else {
        const auto points = harness::mc_sinr_vs_k(cfg, cfg.k_list, cfg.trials,
                                                  harness::stream(root, harness::Stream::kMonteCarlo));
        emit(mc_opts.out_path, out,
             [&](std::ostream& os) { harness::write_sinr_csv(os, points, cfg.power_mode); });
      }
    } else if (*dataset) {
      ExperimentConfig cfg = ds_opts.config();
      if (ds_horizon) cfg.horizon = *ds_horizon;
      if (ds_k) cfg.k_devices = *ds_k;
      const harness::Dataset ds = harness::generate_dataset(cfg, RandomStream(cfg.seed));
      emit(ds_opts.out_path, out, [&](std::ostream& os) { harness::write_dataset_csv(os, ds); });
    } else if (*bandit_cmd) {
      ExperimentConfig cfg = bandit_opts.config();
      if (bandit_horizon) cfg.horizon = *bandit_horizon;
      cfg.validate();
      const harness::Dataset ds = load_or_generate(bandit_dataset, cfg);
      auto policy = harness::make_policy(policy_name, ds, cfg);
      RandomStream rng = harness::stream(RandomStream(cfg.seed), harness::Stream::kPolicy);
      const bandit::EpisodeTrace trace = harness::run_bandit(ds, *policy, rng);
      if (!state_out.empty()) {
        const auto* linear = dynamic_cast<const bandit::LinearThompsonPolicy*>(policy.get());
        if (!linear) throw ConfigError("--state-out applies to the linear policy only");
        emit(state_out, out, [&](std::ostream& os) { linear->save_state(os); });
      }
      emit(bandit_opts.out_path, out,
           [&](std::ostream& os) { harness::write_trace_csv(os, trace); });
    } else if (*report) {
      ExperimentConfig cfg = report_opts.config();
      if (report_horizon) cfg.horizon = *report_horizon;
      cfg.validate();
      std::vector<bandit::EpisodeTrace> traces;
      if (!report_traces.empty()) {
        for (const std::string& path : report_traces) {
          std::ifstream in(path);
          if (!in) throw ConfigError("cannot open trace '" + path + "'");
          traces.push_back(harness::read_trace_csv(in));
        }
      } else {
        const harness::Dataset ds = load_or_generate(report_dataset, cfg);
        for (const char* name : {"oracle", "linear", "uniform"}) {
          traces.push_back(run_policy(name, ds, cfg));
        }
      }
      const std::vector<harness::SummaryRow> rows = harness::report(traces);
      emit(report_opts.out_path, out, [&](std::ostream& os) {
        if (report_table) {
          harness::write_summary_table(os, rows);
        } else {
          harness::write_summary_csv(os, rows);
        }
      });
    }
  } catch (const std::exception& e) {
    err << "oso: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace oso::cli
