#include "nlosd/csi.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlosd/errors.hpp"

namespace nlosd {

namespace {

constexpr std::uint64_t kPhaseStream = 0x7068617365ull;  // scatterer phases
constexpr std::uint64_t kNoiseStream = 0x6e6f697365ull;  // per-frame noise

// exp(j step * i) for i = 0..count-1, incremental rotation with periodic
// resync so magnitude drift stays near machine epsilon.
void fill_phasor(std::vector<std::complex<double>>& out, std::size_t count, double step) {
  out.resize(count);
  const std::complex<double> rot = std::polar(1.0, step);
  std::complex<double> cur(1.0, 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    if ((i & 255u) == 0u) cur = std::polar(1.0, step * static_cast<double>(i));
    out[i] = cur;
    cur *= rot;
  }
}

}  // namespace

Rng frame_noise_rng(const Scene& scene, std::size_t frame_index) {
  return Rng::substream(scene.seed, kNoiseStream, frame_index);
}

CsiFrame synthesize_csi(const Scene& scene, const SystemConfig& cfg, std::size_t frame_index,
                        Rng& rng) {
  const double t_frame = static_cast<double>(frame_index) * cfg.frame_duration_s;
  if (scene.duration_s > 0.0 && t_frame > scene.duration_s) {
    throw std::out_of_range("synthesize_csi: frame timestamp beyond scene duration");
  }

  const std::size_t n_sub = cfg.subcarrier_count;
  const std::size_t n_sym = cfg.symbol_count_per_frame;
  CsiFrame frame;
  frame.rows = n_sub;
  frame.cols = n_sym;
  frame.mask = build_tdd_mask(cfg);
  frame.frame_index = frame_index;
  frame.timestamp_s = t_frame;

  std::vector<std::complex<double>> acc(n_sub * n_sym, {0.0, 0.0});
  std::vector<std::complex<double>> range_phasor;
  std::vector<std::complex<double>> doppler_phasor;

  for (std::size_t p = 0; p < scene.scatterers.size(); ++p) {
    const Scatterer& sc = scene.scatterers[p];
    if (sc.amplitude == 0.0) continue;
    const TrajectoryState st = trajectory_state(sc, t_frame);
    const double tau = 2.0 * st.range_m / kSpeedOfLight;
    const double doppler_sign = sc.nlos ? -1.0 : 1.0;
    const double f_doppler =
        doppler_sign * 2.0 * st.speed_mps * cfg.carrier_frequency_hz / kSpeedOfLight;

    const double range_step = -2.0 * std::numbers::pi * cfg.subcarrier_spacing_hz * tau;
    const double doppler_step = 2.0 * std::numbers::pi * cfg.symbol_duration_s * f_doppler;
    fill_phasor(range_phasor, n_sub, range_step);
    fill_phasor(doppler_phasor, n_sym, doppler_step);

    double phase = 0.0;
    if (sc.phase_rad.has_value()) {
      phase = *sc.phase_rad;
    } else {
      Rng phase_rng = Rng::substream(scene.seed, kPhaseStream, p);
      phase = phase_rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    const std::complex<double> gain = std::polar(sc.amplitude, phase);

    for (std::size_t n = 0; n < n_sub; ++n) {
      const std::complex<double> row_gain = gain * range_phasor[n];
      std::complex<double>* row = acc.data() + n * n_sym;
      const std::complex<double>* dop = doppler_phasor.data();
      for (std::size_t m = 0; m < n_sym; ++m) {
        row[m] += row_gain * dop[m];
      }
    }
  }

  if (scene.noise_power > 0.0) {
    const double sigma = std::sqrt(scene.noise_power / 2.0);
    for (std::size_t n = 0; n < n_sub; ++n) {
      std::complex<double>* row = acc.data() + n * n_sym;
      for (std::size_t m = 0; m < n_sym; ++m) {
        if (!frame.mask.usable[m]) continue;  // UL cells are zeroed anyway
        double re, im;
        rng.normal_pair(re, im);
        row[m] += std::complex<double>(sigma * re, sigma * im);
      }
    }
  }

  frame.h.resize(n_sub * n_sym);
  for (std::size_t n = 0; n < n_sub; ++n) {
    const std::complex<double>* src = acc.data() + n * n_sym;
    std::complex<float>* dst = frame.h.data() + n * n_sym;
    for (std::size_t m = 0; m < n_sym; ++m) {
      dst[m] = frame.mask.usable[m]
                   ? std::complex<float>(static_cast<float>(src[m].real()),
                                         static_cast<float>(src[m].imag()))
                   : std::complex<float>(0.0f, 0.0f);
    }
  }
  return frame;
}

std::size_t dataset_frame_count(const Scene& scene, const SystemConfig& cfg) {
  if (scene.duration_s < cfg.frame_duration_s) return 0;
  // Guarded floor: 10 s / 10 ms must give exactly 1000 frames and
  // 0.3 s / 10 ms exactly 30 despite binary rounding of the quotient.
  return static_cast<std::size_t>(
      std::floor(scene.duration_s / cfg.frame_duration_s + 1e-6));
}

std::vector<CsiFrame> generate_dataset(const Scene& scene, const SystemConfig& cfg) {
  validate_scene(scene, cfg);
  const std::size_t count = dataset_frame_count(scene, cfg);
  std::vector<CsiFrame> frames;
  frames.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = frame_noise_rng(scene, i);
    frames.push_back(synthesize_csi(scene, cfg, i, rng));
  }
  return frames;
}

void for_each_frame(const Scene& scene, const SystemConfig& cfg,
                    const std::function<void(const CsiFrame&)>& fn) {
  validate_scene(scene, cfg);
  const std::size_t count = dataset_frame_count(scene, cfg);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = frame_noise_rng(scene, i);
    fn(synthesize_csi(scene, cfg, i, rng));
  }
}

}  // namespace nlosd
