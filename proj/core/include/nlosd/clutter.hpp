#pragma once

#include <cstdint>
#include <vector>

#include "nlosd/peaks.hpp"
#include "nlosd/rng.hpp"

namespace nlosd {

/// Synthetic false-detection model: per frame a Poisson-distributed number of
/// peaks, each uniform over the NLOS measurement rectangle. The speed support
/// is the pair of bands +-[speed_min_mps, speed_max_mps], both signs equally
/// likely, so samples always clear the zero-Doppler gate.
struct ClutterConfig {
  double rate = 0.8;  // lambda, expected false peaks per frame
  double range_min_m = 23.0;
  double range_max_m = 150.0;
  double speed_min_mps = 0.6;
  double speed_max_mps = 8.0;
  std::uint64_t seed = 0;

  /// Area of the measurement space, for kappa = lambda / V.
  double support_area() const {
    return (range_max_m - range_min_m) * 2.0 * (speed_max_mps - speed_min_mps);
  }
  double clutter_intensity() const { return rate / support_area(); }
  void validate() const;
};

/// Clutter peaks of one frame; deterministic per (seed, frame_index).
std::vector<Peak> sample_clutter(const ClutterConfig& cfg, std::size_t frame_index);

/// Appends clutter to every frame of a peak stream.
std::vector<std::vector<Peak>> inject_clutter(const std::vector<std::vector<Peak>>& frames,
                                              const ClutterConfig& cfg);

}  // namespace nlosd
