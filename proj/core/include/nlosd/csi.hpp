#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "nlosd/rng.hpp"
#include "nlosd/scene.hpp"
#include "nlosd/system.hpp"

namespace nlosd {

/// Channel matrix of one radio frame: N subcarriers x M symbols, row-major.
/// Cells at masked-out (UL) symbol columns are exactly zero.
struct CsiFrame {
  std::vector<std::complex<float>> h;
  std::size_t rows = 0;  // N
  std::size_t cols = 0;  // M
  SymbolMask mask;
  std::size_t frame_index = 0;
  double timestamp_s = 0.0;

  std::complex<float>& at(std::size_t n, std::size_t m) { return h[n * cols + m]; }
  const std::complex<float>& at(std::size_t n, std::size_t m) const { return h[n * cols + m]; }
};

/// Synthesizes the CSI of one frame as a sum of point-scatterer exponentials
/// plus circular white noise, with UL columns zeroed afterwards:
///   h[n,m] = sum_p b_p exp(-j 2 pi n df tau_p) exp(+j 2 pi m T fD_p) + w[n,m]
/// where tau_p = 2 r_p / c and fD_p = s_p 2 v_p f_c / c with s_p = -1 for
/// NLOS scatterers (bounce reverses the measured range-rate sign).
/// Scatterer phases derive from scene.seed; noise is drawn from `rng`.
CsiFrame synthesize_csi(const Scene& scene, const SystemConfig& cfg, std::size_t frame_index,
                        Rng& rng);

/// Noise substream for a frame, as used by generate_dataset.
Rng frame_noise_rng(const Scene& scene, std::size_t frame_index);

/// All floor(duration / T_f) frames of a scene, in order. Deterministic for
/// a fixed seed. Materializes everything; prefer for_each_frame for long
/// scenes.
std::vector<CsiFrame> generate_dataset(const Scene& scene, const SystemConfig& cfg);

std::size_t dataset_frame_count(const Scene& scene, const SystemConfig& cfg);

/// Streams dataset frames through `fn` without keeping them in memory.
void for_each_frame(const Scene& scene, const SystemConfig& cfg,
                    const std::function<void(const CsiFrame&)>& fn);

}  // namespace nlosd
