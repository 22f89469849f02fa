#include "nlosd/clutter.hpp"

#include "nlosd/errors.hpp"

namespace nlosd {

namespace {
constexpr std::uint64_t kClutterStream = 0x636c7574ull;
}

void ClutterConfig::validate() const {
  if (rate < 0.0) throw ConfigError("clutter.rate must be >= 0");
  if (range_min_m >= range_max_m) throw ConfigError("clutter: range bounds must be ordered");
  if (speed_min_mps >= speed_max_mps) throw ConfigError("clutter: speed bounds must be ordered");
  if (speed_min_mps <= 0.0) {
    throw ConfigError("clutter.speed_min_mps must be positive (exclude the zero-Doppler gate)");
  }
}

std::vector<Peak> sample_clutter(const ClutterConfig& cfg, std::size_t frame_index) {
  cfg.validate();
  Rng rng = Rng::substream(cfg.seed, kClutterStream, frame_index);
  const int count = rng.poisson(cfg.rate);
  std::vector<Peak> peaks;
  peaks.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Peak p;
    p.range_m = rng.uniform(cfg.range_min_m, cfg.range_max_m);
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    p.speed_mps = sign * rng.uniform(cfg.speed_min_mps, cfg.speed_max_mps);
    p.power = 1.0;
    peaks.push_back(p);
  }
  return peaks;
}

std::vector<std::vector<Peak>> inject_clutter(const std::vector<std::vector<Peak>>& frames,
                                              const ClutterConfig& cfg) {
  std::vector<std::vector<Peak>> out = frames;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::vector<Peak> clutter = sample_clutter(cfg, i);
    out[i].insert(out[i].end(), clutter.begin(), clutter.end());
  }
  return out;
}

}  // namespace nlosd
