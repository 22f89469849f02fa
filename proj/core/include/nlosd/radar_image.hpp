#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "nlosd/csi.hpp"
#include "nlosd/system.hpp"

namespace nlosd {

/// Range-Doppler power map of one frame. Rows are range bins k in
/// [0, N'), columns are FFT-shifted Doppler bins: column j corresponds to
/// the signed Doppler bin d = j - M'/2.
struct RadarImage {
  std::vector<double> power;  // N' x M', row-major
  AxisMap axes;
  std::size_t frame_index = 0;

  double at(std::size_t range_bin, std::size_t col) const {
    return power[range_bin * axes.padded_cols + col];
  }
  double& at(std::size_t range_bin, std::size_t col) {
    return power[range_bin * axes.padded_cols + col];
  }
  /// Signed Doppler bin for column j.
  long signed_doppler(std::size_t col) const {
    return static_cast<long>(col) - static_cast<long>(axes.padded_cols / 2);
  }
};

/// Computes periodograms with cached FFTW plans and buffers. One engine per
/// thread; plan creation is serialized internally as FFTW requires.
class PeriodogramEngine {
 public:
  explicit PeriodogramEngine(const AxisMap& axes);
  ~PeriodogramEngine();
  PeriodogramEngine(const PeriodogramEngine&) = delete;
  PeriodogramEngine& operator=(const PeriodogramEngine&) = delete;

  /// Zero-pads H to N' x M', runs a forward DFT along the symbol axis and an
  /// inverse DFT along the subcarrier axis, and returns |.|^2 / (N' M') with
  /// the Doppler axis FFT-shifted. Throws FormatError on dimension mismatch.
  RadarImage compute(const CsiFrame& frame);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper around PeriodogramEngine.
RadarImage compute_periodogram(const CsiFrame& frame, const AxisMap& axes);

}  // namespace nlosd
