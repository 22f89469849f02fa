#include "nlosd/system.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nlosd/errors.hpp"

namespace nlosd {

void SystemConfig::validate() const {
  if (carrier_frequency_hz <= 0.0) throw ConfigError("carrier_frequency_hz must be positive");
  if (subcarrier_count < 1) throw ConfigError("subcarrier_count must be >= 1");
  if (subcarrier_spacing_hz <= 0.0) throw ConfigError("subcarrier_spacing_hz must be positive");
  if (symbol_count_per_frame < 1) throw ConfigError("symbol_count_per_frame must be >= 1");
  if (symbol_duration_s <= 0.0) throw ConfigError("symbol_duration_s must be positive");
  if (frame_duration_s <= 0.0) throw ConfigError("frame_duration_s must be positive");
  if (dl_symbols_per_pattern == 0) throw ConfigError("dl_symbols_per_pattern must be >= 1");
  const std::size_t pattern = pattern_length();
  if (symbol_count_per_frame % pattern != 0) {
    std::ostringstream os;
    os << "dl_symbols_per_pattern + ul_symbols_per_pattern (" << pattern
       << ") must divide symbol_count_per_frame (" << symbol_count_per_frame << ")";
    throw ConfigError(os.str());
  }
  const double derived_tdd = static_cast<double>(pattern) * symbol_duration_s;
  if (tdd_pattern_duration_s > 0.0) {
    const double rel = std::abs(derived_tdd - tdd_pattern_duration_s) / tdd_pattern_duration_s;
    if (rel > 0.01) {
      std::ostringstream os;
      os << "tdd_pattern_duration_s (" << tdd_pattern_duration_s
         << ") deviates more than 1% from (M_DL+M_UL)*T (" << derived_tdd << ")";
      throw ConfigError(os.str());
    }
  }
}

std::size_t SymbolMask::popcount() const {
  return std::accumulate(usable.begin(), usable.end(), std::size_t{0});
}

std::size_t SymbolMask::detect_period(const std::vector<std::uint8_t>& bits) {
  const std::size_t m = bits.size();
  for (std::size_t p = 1; p <= m; ++p) {
    if (m % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < m && periodic; ++i) {
      periodic = bits[i] == bits[i - p];
    }
    if (periodic) return p;
  }
  return m;
}

SymbolMask build_tdd_mask(const SystemConfig& cfg) {
  cfg.validate();
  SymbolMask mask;
  mask.usable.resize(cfg.symbol_count_per_frame);
  const std::size_t pattern = cfg.pattern_length();
  for (std::size_t m = 0; m < mask.usable.size(); ++m) {
    mask.usable[m] = (m % pattern) < cfg.dl_symbols_per_pattern ? 1 : 0;
  }
  mask.period = SymbolMask::detect_period(mask.usable);
  return mask;
}

AxisMap axis_map(const SystemConfig& cfg) {
  cfg.validate();
  AxisMap axes;
  axes.padded_rows = std::bit_ceil(cfg.subcarrier_count);
  axes.padded_cols = std::bit_ceil(cfg.symbol_count_per_frame);
  axes.range_per_bin_m =
      kSpeedOfLight / (2.0 * static_cast<double>(axes.padded_rows) * cfg.subcarrier_spacing_hz);
  const double wavelength = kSpeedOfLight / cfg.carrier_frequency_hz;
  axes.speed_per_bin_mps =
      wavelength / (2.0 * static_cast<double>(axes.padded_cols) * cfg.symbol_duration_s);
  axes.unambiguous_range_m = axes.range_per_bin_m * static_cast<double>(axes.padded_rows);
  axes.unambiguous_speed_mps = axes.speed_per_bin_mps * static_cast<double>(axes.padded_cols);
  return axes;
}

double replica_spacing_bins(const SystemConfig& cfg, const AxisMap& axes) {
  if (cfg.ul_symbols_per_pattern == 0) {
    return static_cast<double>(axes.padded_cols);
  }
  return static_cast<double>(axes.padded_cols) / static_cast<double>(cfg.pattern_length());
}

double unpadded_speed_resolution_mps(const SystemConfig& cfg) {
  const double wavelength = kSpeedOfLight / cfg.carrier_frequency_hz;
  return wavelength /
         (2.0 * static_cast<double>(cfg.symbol_count_per_frame) * cfg.symbol_duration_s);
}

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const char* context) {
  for (const auto& item : j.items()) {
    bool found = false;
    for (const char* k : known) {
      if (item.key() == k) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw ConfigError(std::string(context) + ": unknown key '" + item.key() + "'");
    }
  }
}

}  // namespace

SystemConfig parse_system_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("system config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("system config: top level must be an object");
  reject_unknown_keys(j,
                      {"carrier_frequency_hz", "subcarrier_count", "subcarrier_spacing_hz",
                       "symbol_count_per_frame", "symbol_duration_s", "frame_duration_s",
                       "dl_symbols_per_pattern", "ul_symbols_per_pattern",
                       "tdd_pattern_duration_s"},
                      "system config");
  SystemConfig cfg;
  try {
    if (j.contains("carrier_frequency_hz")) cfg.carrier_frequency_hz = j["carrier_frequency_hz"];
    if (j.contains("subcarrier_count")) cfg.subcarrier_count = j["subcarrier_count"];
    if (j.contains("subcarrier_spacing_hz")) cfg.subcarrier_spacing_hz = j["subcarrier_spacing_hz"];
    if (j.contains("symbol_count_per_frame"))
      cfg.symbol_count_per_frame = j["symbol_count_per_frame"];
    if (j.contains("symbol_duration_s")) cfg.symbol_duration_s = j["symbol_duration_s"];
    if (j.contains("frame_duration_s")) cfg.frame_duration_s = j["frame_duration_s"];
    if (j.contains("dl_symbols_per_pattern"))
      cfg.dl_symbols_per_pattern = j["dl_symbols_per_pattern"];
    if (j.contains("ul_symbols_per_pattern"))
      cfg.ul_symbols_per_pattern = j["ul_symbols_per_pattern"];
    if (j.contains("tdd_pattern_duration_s"))
      cfg.tdd_pattern_duration_s = j["tdd_pattern_duration_s"];
  } catch (const json::exception& e) {
    throw ConfigError(std::string("system config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

SystemConfig load_system_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open system config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system_config(buf.str());
}

}  // namespace nlosd
