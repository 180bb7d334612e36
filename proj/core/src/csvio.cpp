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

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "oso/errors.hpp"
#include "oso/harness.hpp"
#include "oso/textio.hpp"

namespace oso::harness {
namespace {

constexpr const char* kTraceHeader = "step,context_id,arm,reward,optimal_reward,regret_cum";
constexpr const char* kSummaryHeader =
    "policy,horizon,cumulative_reward,optimal_reward,ratio_to_optimal,final_regret";

std::string fmt(double v) { return format_double(v); }

// Reads the `#schema=` line and the column header. Returns the schema
// attributes after the schema name, e.g. "policy=linear".
class CsvReader {
 public:
  CsvReader(std::istream& in, std::string_view schema) : in_(in) {
    std::string line;
    if (!std::getline(in_, line)) throw ConfigError("empty CSV input");
    const std::string prefix = "#schema=" + std::string(schema);
    if (line.rfind(prefix, 0) != 0) {
      throw ConfigError("expected '" + prefix + "', got '" + line + "'");
    }
    attrs_ = std::string(trim(std::string_view(line).substr(prefix.size())));
    if (!std::getline(in_, header_)) throw ConfigError("CSV header missing");
    header_ = std::string(trim(header_));
  }

  const std::string& attrs() const { return attrs_; }
  const std::string& header() const { return header_; }

  std::string attr(std::string_view key) const {
    for (std::string_view token : split(attrs_, ' ')) {
      if (token.size() > key.size() && token.substr(0, key.size()) == key &&
          token[key.size()] == '=') {
        return std::string(token.substr(key.size() + 1));
      }
    }
    throw ConfigError("CSV schema line lacks '" + std::string(key) + "'");
  }

  // Next data row split on commas; false at end of input.
  bool next(std::vector<std::string_view>& fields, std::size_t expected) {
    while (std::getline(in_, line_)) {
      ++row_;
      if (trim(line_).empty()) continue;
      fields = split(trim(line_), ',');
      if (fields.size() != expected) {
        throw ConfigError("CSV row " + std::to_string(row_) + ": expected " +
                          std::to_string(expected) + " fields, got " +
                          std::to_string(fields.size()));
      }
      return true;
    }
    return false;
  }

 private:
  std::istream& in_;
  std::string attrs_;
  std::string header_;
  std::string line_;
  std::size_t row_ = 0;
};

void expect_header(const CsvReader& reader, std::string_view header) {
  if (reader.header() != header) {
    throw ConfigError("unexpected CSV header '" + reader.header() + "'");
  }
}

}  // namespace

void write_trace_csv(std::ostream& out, const bandit::EpisodeTrace& trace) {
  out << "#schema=oso-trace/1 policy=" << trace.policy << '\n' << kTraceHeader << '\n';
  double regret = 0.0;
  for (const auto& s : trace.steps) {
    regret += s.optimal_reward - s.reward;
    out << s.step << ',' << s.context_id << ',' << s.arm << ',' << fmt(s.reward) << ','
        << fmt(s.optimal_reward) << ',' << fmt(regret) << '\n';
  }
}

bandit::EpisodeTrace read_trace_csv(std::istream& in) {
  CsvReader reader(in, "oso-trace/1");
  expect_header(reader, kTraceHeader);
  bandit::EpisodeTrace trace;
  trace.policy = reader.attr("policy");
  std::vector<std::string_view> f;
  while (reader.next(f, 6)) {
    trace.steps.push_back({parse_size(f[0]), parse_size(f[1]), parse_size(f[2]),
                           parse_double(f[3]), parse_double(f[4])});
  }
  trace.validate();
  return trace;
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << "#schema=oso-summary/1\n" << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << r.policy << ',' << r.horizon << ',' << fmt(r.cumulative_reward) << ','
        << fmt(r.optimal_reward) << ',' << fmt(r.ratio_to_optimal) << ',' << fmt(r.final_regret)
        << '\n';
  }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  CsvReader reader(in, "oso-summary/1");
  expect_header(reader, kSummaryHeader);
  std::vector<SummaryRow> rows;
  std::vector<std::string_view> f;
  while (reader.next(f, 6)) {
    rows.push_back({std::string(f[0]), parse_size(f[1]), parse_double(f[2]), parse_double(f[3]),
                    parse_double(f[4]), parse_double(f[5])});
  }
  return rows;
}

void write_summary_table(std::ostream& out, std::span<const SummaryRow> rows) {
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.policy.size());
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  out << pad("policy", width) << "  " << pad("horizon", 8) << "  " << pad("reward", 12) << "  "
      << pad("optimal", 12) << "  " << pad("ratio", 8) << "  regret\n";
  for (const auto& r : rows) {
    char reward[32], optimal[32], ratio[32], regret[32];
    std::snprintf(reward, sizeof reward, "%.2f", r.cumulative_reward);
    std::snprintf(optimal, sizeof optimal, "%.2f", r.optimal_reward);
    std::snprintf(ratio, sizeof ratio, "%.4f", r.ratio_to_optimal);
    std::snprintf(regret, sizeof regret, "%.2f", r.final_regret);
    out << pad(r.policy, width) << "  " << pad(std::to_string(r.horizon), 8) << "  "
        << pad(reward, 12) << "  " << pad(optimal, 12) << "  " << pad(ratio, 8) << "  " << regret
        << '\n';
  }
}

void write_dataset_csv(std::ostream& out, const Dataset& ds) {
  const Eigen::Index c = ds.contexts.cols();
  const Eigen::Index k = ds.rewards.cols();
  out << "#schema=oso-dataset/1 m=" << ds.m_antennas << " context_dim=" << c << " arms=" << k
      << '\n';
  out << "step,optimal_arm,optimal_reward";
  for (Eigen::Index i = 0; i < c; ++i) out << ",q" << i;
  for (Eigen::Index i = 0; i < k; ++i) out << ",r" << i;
  out << '\n';
  for (std::size_t t = 0; t < ds.horizon(); ++t) {
    const auto row = static_cast<Eigen::Index>(t);
    out << t << ',' << ds.optimal_arm[t] << ',' << fmt(ds.optimal_reward[t]);
    for (Eigen::Index i = 0; i < c; ++i) out << ',' << fmt(ds.contexts(row, i));
    for (Eigen::Index i = 0; i < k; ++i) out << ',' << fmt(ds.rewards(row, i));
    out << '\n';
  }
}

Dataset read_dataset_csv(std::istream& in) {
  CsvReader reader(in, "oso-dataset/1");
  Dataset ds;
  ds.m_antennas = parse_size(reader.attr("m"));
  const std::size_t c = parse_size(reader.attr("context_dim"));
  const std::size_t k = parse_size(reader.attr("arms"));
  if (c < 1 || k < 1) throw ConfigError("dataset needs context_dim and arms of at least 1");
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> arms;
  std::vector<std::string_view> f;
  while (reader.next(f, 3 + c + k)) {
    if (parse_size(f[0]) != rows.size()) throw ConfigError("dataset steps must be consecutive");
    arms.push_back(parse_size(f[1]));
    std::vector<double> values;
    values.reserve(1 + c + k);
    for (std::size_t i = 2; i < f.size(); ++i) values.push_back(parse_double(f[i]));
    rows.push_back(std::move(values));
  }
  const auto t_max = static_cast<Eigen::Index>(rows.size());
  ds.contexts.resize(t_max, static_cast<Eigen::Index>(c));
  ds.rewards.resize(t_max, static_cast<Eigen::Index>(k));
  for (Eigen::Index t = 0; t < t_max; ++t) {
    const auto& v = rows[static_cast<std::size_t>(t)];
    ds.optimal_arm.push_back(arms[static_cast<std::size_t>(t)]);
    ds.optimal_reward.push_back(v[0]);
    for (std::size_t i = 0; i < c; ++i) ds.contexts(t, static_cast<Eigen::Index>(i)) = v[1 + i];
    for (std::size_t i = 0; i < k; ++i) ds.rewards(t, static_cast<Eigen::Index>(i)) = v[1 + c + i];
  }
  ds.validate();
  return ds;
}

void write_sinr_csv(std::ostream& out, std::span<const SinrPoint> points,
                    airlink::MtdPowerMode mode) {
  out << "#schema=oso-mc-sinr/1 mode="
      << (mode == airlink::MtdPowerMode::kFixed ? "fixed" : "powerctl") << '\n'
      << "k,trials,mean_sinr_db,stderr_db,median_sinr_db,mean_mta_sinr_db\n";
  for (const auto& p : points) {
    out << p.k << ',' << p.trials << ',' << fmt(p.mean_sinr_db) << ',' << fmt(p.stderr_db) << ','
        << fmt(p.median_sinr_db) << ',' << fmt(p.mean_mta_sinr_db) << '\n';
  }
}

void write_outage_csv(std::ostream& out, std::span<const OutagePoint> points,
                      double threshold_db) {
  out << "#schema=oso-mc-outage/1 threshold_db=" << fmt(threshold_db) << '\n'
      << "k,trials,empirical,stderr,closed_form\n";
  for (const auto& p : points) {
    out << p.k << ',' << p.trials << ',' << fmt(p.empirical) << ',' << fmt(p.stderr_) << ','
        << fmt(p.closed_form) << '\n';
  }
}

void write_curve_csv(std::ostream& out, const closedform::DistributionCurve& curve,
                     const std::string& kind) {
  out << "#schema=oso-curve/1 kind=" << kind << "\nx,value\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out << fmt(curve.grid[i]) << ',' << fmt(curve.values[i]) << '\n';
  }
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m, const std::string& kind,
                      bool with_header) {
  if (with_header) out << "#schema=oso-matrix/1\nkind,row,col,re,im\n";
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    for (Eigen::Index row = 0; row < m.rows(); ++row) {
      out << kind << ',' << row << ',' << col << ',' << fmt(m(row, col).real()) << ','
          << fmt(m(row, col).imag()) << '\n';
    }
  }
}

}  // namespace oso::harness
