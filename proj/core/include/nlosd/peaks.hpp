#pragma once

#include <string>
#include <vector>

#include "nlosd/cfar.hpp"
#include "nlosd/radar_image.hpp"
#include "nlosd/system.hpp"

namespace nlosd {

/// One detection in physical units plus its grid location.
struct Peak {
  double range_m = 0.0;
  double speed_mps = 0.0;  // signed, as measured (NLOS bounce flips the sign)
  double power = 0.0;      // linear
  long range_bin = -1;
  long doppler_bin = -1;  // signed bin; 0 = static
};

/// TDD replica rejection tuning. Replicas are searched at Doppler offsets of
/// +-k * M'/(M_DL+M_UL) bins, k = 1..max_harmonics, within +-1 bin in both
/// axes; a cell is suppressed when its power is at most `power_margin` times
/// the level predicted from the mask's Fourier coefficients.
/// max_harmonics <= 0 covers every harmonic of the mask period; strong static
/// reflectors leak detectable replicas well beyond the first few orders.
struct ReplicaConfig {
  int max_harmonics = 0;
  double power_margin = 3.0;
};

/// |G_k / G_0|^2 for k = 1..max_harmonics, where G_k are the DFS coefficients
/// of one mask period. Expected power of the k-th replica relative to its
/// parent peak. All-usable masks yield all zeros (no replicas).
std::vector<double> replica_power_ratios(const SymbolMask& mask, int max_harmonics);

/// Greedy strongest-first replica rejection: accept the strongest unclaimed
/// cell as a true peak, suppress plausible replicas of it, repeat. Survivors
/// are converted to physical units via the image's axis map.
std::vector<Peak> reject_tdd_replicas(const std::vector<CfarDetection>& cells,
                                      const RadarImage& image, const SymbolMask& mask,
                                      const ReplicaConfig& cfg);

/// Keeps peaks with |speed| strictly above the gate (Z_mov).
std::vector<Peak> discard_static(const std::vector<Peak>& peaks, double speed_gate_mps);

/// Keeps peaks with range strictly beyond the boundary reflector.
std::vector<Peak> nlos_filter(const std::vector<Peak>& peaks, double nlos_boundary_range_m);

/// Peak list CSV: frame_index,t_s,range_m,speed_mps,power_db. A leading
/// comment line records the total frame count (empty frames carry no rows)
/// and the frame interval.
void write_peaks_csv(const std::string& path,
                     const std::vector<std::vector<Peak>>& frames, double frame_interval_s);
std::vector<std::vector<Peak>> read_peaks_csv(const std::string& path,
                                              double* frame_interval_s = nullptr);

}  // namespace nlosd
