#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace nlosd {

/// Exact speed of light, used for every delay/Doppler conversion.
inline constexpr double kSpeedOfLight = 299792458.0;

/// OFDM numerology and TDD frame structure of the sensing system.
/// Defaults follow the 27.4 GHz FR2 deployment this pipeline targets.
struct SystemConfig {
  double carrier_frequency_hz = 27.4e9;
  std::size_t subcarrier_count = 1584;    // N
  double subcarrier_spacing_hz = 120e3;   // delta f
  std::size_t symbol_count_per_frame = 1120;  // M
  double symbol_duration_s = 8.92e-6;     // T, cyclic prefix included
  double frame_duration_s = 10e-3;        // T_f
  std::size_t dl_symbols_per_pattern = 104;  // M_DL
  std::size_t ul_symbols_per_pattern = 36;   // M_UL
  double tdd_pattern_duration_s = 1.25e-3;   // T_TDD

  std::size_t pattern_length() const { return dl_symbols_per_pattern + ul_symbols_per_pattern; }
  std::size_t patterns_per_frame() const { return symbol_count_per_frame / pattern_length(); }

  /// Throws ConfigError when the numerology is inconsistent.
  void validate() const;
};

/// Per-symbol sensing availability over one frame. UL symbols are unusable
/// and appear as periodic holes in the slow-time axis.
struct SymbolMask {
  std::vector<std::uint8_t> usable;  // length M, 1 = DL symbol
  std::size_t period = 0;            // minimal period in symbols

  std::size_t size() const { return usable.size(); }
  std::size_t popcount() const;

  /// Recovers the minimal period from the raw bit pattern. Used when a mask
  /// is read back from a dataset file without its generating config.
  static std::size_t detect_period(const std::vector<std::uint8_t>& bits);
};

/// Padded transform geometry and bin-to-physical-unit scales.
struct AxisMap {
  std::size_t padded_rows = 0;   // N' = 2^ceil(log2 N), range axis
  std::size_t padded_cols = 0;   // M' = 2^ceil(log2 M), Doppler axis
  double range_per_bin_m = 0.0;
  double speed_per_bin_mps = 0.0;
  double unambiguous_range_m = 0.0;  // full span of the range axis
  double unambiguous_speed_mps = 0.0;  // full span of the Doppler axis (both signs)
};

/// Builds the frame's DL/UL mask: within each pattern the first M_DL symbols
/// are usable, the remaining M_UL are not.
SymbolMask build_tdd_mask(const SystemConfig& cfg);

/// Transform geometry for the given numerology.
AxisMap axis_map(const SystemConfig& cfg);

/// Doppler-bin offset between consecutive TDD spectral replicas,
/// M' / (M_DL + M_UL). Generally non-integer. With no UL holes there are no
/// replicas and the aliasing distance M' is returned instead.
double replica_spacing_bins(const SystemConfig& cfg, const AxisMap& axes);

/// Doppler resolution of the unpadded aperture expressed as speed,
/// (c / f_c) / (2 M T). Default gate for the static-peak discard.
double unpadded_speed_resolution_mps(const SystemConfig& cfg);

/// Loads a SystemConfig from a JSON document; unknown keys are rejected.
SystemConfig load_system_config(const std::string& path);
SystemConfig parse_system_config(const std::string& json_text);

}  // namespace nlosd
