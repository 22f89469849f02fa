#pragma once

#include <cstddef>
#include <vector>

#include "nlosd/radar_image.hpp"

namespace nlosd {

/// Cell-averaging CFAR window. `training_cells` and `guard_cells` extend per
/// axis on each side of the cell under test; the window wraps toroidally at
/// the image edges.
struct CfarConfig {
  std::size_t training_cells = 8;
  std::size_t guard_cells = 2;
  double probability_of_false_alarm = 1e-4;

  std::size_t half_extent() const { return training_cells + guard_cells; }
  std::size_t training_cell_count() const {
    const std::size_t outer = 2 * half_extent() + 1;
    const std::size_t inner = 2 * guard_cells + 1;
    return outer * outer - inner * inner;
  }
  void validate() const;
};

/// CA-CFAR threshold multiplier alpha = N_t (P_fa^(-1/N_t) - 1).
double cfar_threshold_factor(std::size_t training_cell_count, double probability_of_false_alarm);

struct CfarDetection {
  std::size_t range_bin = 0;  // row
  std::size_t col = 0;        // shifted Doppler column
  double power = 0.0;
};

/// Flags cells whose power exceeds alpha times the training-cell mean, then
/// keeps only local maxima within the guard neighborhood. Detections are
/// returned sorted by descending power. Throws ConfigError when the window
/// does not fit the image.
std::vector<CfarDetection> cfar_detect(const RadarImage& image, const CfarConfig& cfar);

}  // namespace nlosd
