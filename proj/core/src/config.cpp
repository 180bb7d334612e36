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

#include "oso/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "oso/errors.hpp"
#include "oso/textio.hpp"

namespace oso::harness {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

bool parse_bool(std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "on" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "off" || text == "no") return false;
  throw ConfigError("not a boolean: '" + std::string(text) + "'");
}

std::string format_bool(bool v) { return v ? "true" : "false"; }

template <typename T, typename Parse>
std::vector<T> parse_list(std::string_view text, Parse parse) {
  std::vector<T> out;
  for (std::string_view part : split(trim(text), ',')) out.push_back(parse(part));
  return out;
}

template <typename T, typename Format>
std::string format_list(const std::vector<T>& values, Format format) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format(values[i]);
  }
  return out;
}

struct Field {
  const char* key;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

Field real(const char* key, double ExperimentConfig::*member) {
  return {key, [member](ExperimentConfig& c, std::string_view v) { c.*member = parse_double(v); },
          [member](const ExperimentConfig& c) { return format_double(c.*member); }};
}

Field flag(const char* key, bool ExperimentConfig::*member) {
  return {key, [member](ExperimentConfig& c, std::string_view v) { c.*member = parse_bool(v); },
          [member](const ExperimentConfig& c) { return format_bool(c.*member); }};
}

Field count(const char* key, std::size_t ExperimentConfig::*member) {
  return {key, [member](ExperimentConfig& c, std::string_view v) { c.*member = parse_size(v); },
          [member](const ExperimentConfig& c) { return std::to_string(c.*member); }};
}

const std::vector<Field>& fields() {
  using C = ExperimentConfig;
  static const std::vector<Field> table = {
      {"antenna_positions_m",
       [](C& c, std::string_view v) { c.antenna_positions_m = parse_list<double>(v, parse_double); },
       [](const C& c) { return format_list(c.antenna_positions_m, format_double); }},
      real("wavelength_m", &C::wavelength_m),
      real("cell_radius_m", &C::cell_radius_m),
      real("mta_radius_m", &C::mta_radius_m),
      real("mta_distance_m", &C::mta_distance_m),
      real("min_distance_m", &C::min_distance_m),
      real("htd_aoa_max_deg", &C::htd_aoa_max_deg),
      real("pathloss_intercept_db", &C::pathloss_intercept_db),
      real("pathloss_slope_db", &C::pathloss_slope_db),
      real("shadowing_db", &C::shadowing_db),
      real("angular_spread_deg", &C::angular_spread_deg),
      real("mtd_angular_spread_deg", &C::mtd_angular_spread_deg),
      real("bandwidth_hz", &C::bandwidth_hz),
      real("noise_figure_db", &C::noise_figure_db),
      real("noise_psd_dbm_hz", &C::noise_psd_dbm_hz),
      real("htd_target_sinr_db", &C::htd_target_sinr_db),
      real("mtd_target_snr_db", &C::mtd_target_snr_db),
      {"power_mode",
       [](C& c, std::string_view v) {
         v = trim(v);
         if (v == "fixed") {
           c.power_mode = airlink::MtdPowerMode::kFixed;
         } else if (v == "powerctl") {
           c.power_mode = airlink::MtdPowerMode::kTargetSnr;
         } else {
           throw ConfigError("power_mode must be 'fixed' or 'powerctl'");
         }
       },
       [](const C& c) {
         return std::string(c.power_mode == airlink::MtdPowerMode::kFixed ? "fixed" : "powerctl");
       }},
      real("mtd_power_dbm", &C::mtd_power_dbm),
      real("max_mtd_power_dbm", &C::max_mtd_power_dbm),
      flag("sic", &C::sic),
      count("k_devices", &C::k_devices),
      count("horizon", &C::horizon),
      real("prior_lambda", &C::prior_lambda),
      real("prior_a0", &C::prior_a0),
      real("prior_b0", &C::prior_b0),
      flag("intercept", &C::intercept),
      flag("context_phase_reference", &C::context_phase_reference),
      {"k_list", [](C& c, std::string_view v) { c.k_list = parse_list<std::size_t>(v, parse_size); },
       [](const C& c) {
         return format_list(c.k_list, [](std::size_t k) { return std::to_string(k); });
       }},
      count("trials", &C::trials),
      real("outage_threshold_db", &C::outage_threshold_db),
      {"seed", [](C& c, std::string_view v) { c.seed = parse_size(v); },
       [](const C& c) { return std::to_string(c.seed); }},
      {"threads", [](C& c, std::string_view v) { c.threads = static_cast<unsigned>(parse_size(v)); },
       [](const C& c) { return std::to_string(c.threads); }},
  };
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  geometry().validate();
  fading().validate();
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive");
  };
  positive(cell_radius_m, "cell_radius_m");
  positive(mta_radius_m, "mta_radius_m");
  positive(mta_distance_m, "mta_distance_m");
  positive(min_distance_m, "min_distance_m");
  positive(htd_aoa_max_deg, "htd_aoa_max_deg");
  positive(angular_spread_deg, "angular_spread_deg");
  positive(mtd_angular_spread_deg, "mtd_angular_spread_deg");
  positive(bandwidth_hz, "bandwidth_hz");
  if (angular_spread_deg > 180.0 || mtd_angular_spread_deg > 180.0) {
    throw ConfigError("angular spreads must not exceed 180 degrees");
  }
  if (htd_aoa_max_deg > 180.0) throw ConfigError("htd_aoa_max_deg must not exceed 180");
  if (min_distance_m >= cell_radius_m) throw ConfigError("min_distance_m must be below the cell radius");
  if (mta_distance_m > cell_radius_m) throw ConfigError("aggregator must lie inside the cell");
  if (min_distance_m >= mta_radius_m) throw ConfigError("min_distance_m must be below the MTA radius");
  if (k_devices < 1) throw ConfigError("k_devices must be at least 1");
  if (horizon < k_devices) throw ConfigError("horizon must be at least k_devices");
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  for (std::size_t k : k_list) {
    if (k < 1) throw ConfigError("k_list entries must be at least 1");
  }
  power().validate();
  prior().validate();
}

chanmodel::ArrayGeometry ExperimentConfig::geometry() const {
  chanmodel::ArrayGeometry g;
  g.carrier_wavelength = wavelength_m;
  for (double y : antenna_positions_m) g.antenna_positions.emplace_back(0.0, y);
  return g;
}

chanmodel::LargeScaleFading ExperimentConfig::fading() const {
  return {pathloss_intercept_db, pathloss_slope_db, shadowing_db};
}

double ExperimentConfig::noise_power() const {
  return airlink::noise_power_watts(noise_psd_dbm_hz, bandwidth_hz, noise_figure_db);
}

airlink::PowerConfig ExperimentConfig::power() const {
  airlink::PowerConfig pw;
  pw.p_c = 1.0;
  pw.p_k_mode = power_mode;
  pw.p_k = airlink::dbm_to_watts(mtd_power_dbm);
  pw.target_snr = airlink::db_to_linear(mtd_target_snr_db);
  pw.n0 = noise_power();
  pw.max_p_k = airlink::dbm_to_watts(max_mtd_power_dbm);
  pw.sic = sic;
  return pw;
}

bandit::PriorConfig ExperimentConfig::prior() const {
  return {prior_lambda, prior_a0, prior_b0, intercept};
}

closedform::AnalysisParams ExperimentConfig::analysis(std::size_t k) const {
  closedform::AnalysisParams p;
  p.m_antennas = m_antennas();
  p.k_devices = k;
  p.noise = 1.0;
  p.p_signal = airlink::db_to_linear(htd_target_sinr_db) / static_cast<double>(m_antennas());
  p.p_interf = airlink::dbm_to_watts(mtd_power_dbm) * fading().mean_gain(mta_distance_m / 1000.0) /
               noise_power();
  return p;
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  key = trim(key);
  for (const Field& f : fields()) {
    if (key == f.key) {
      f.set(*this, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Field& f : fields()) out.emplace_back(f.key, f.get(*this));
  return out;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    try {
      cfg.set(view.substr(0, eq), view.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void write_config(std::ostream& out, const ExperimentConfig& cfg) {
  for (const auto& [key, value] : cfg.entries()) out << key << " = " << value << '\n';
}

}  // namespace oso::harness
