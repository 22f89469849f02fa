#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlosd/cfar.hpp"
#include "nlosd/clutter.hpp"
#include "nlosd/csif_io.hpp"
#include "nlosd/evaluation.hpp"
#include "nlosd/peaks.hpp"
#include "nlosd/radar_image.hpp"
#include "nlosd/scene.hpp"

namespace nlosd {

/// One frame's detector chain: CFAR, TDD replica rejection, static-peak
/// discard, NLOS region gate.
struct DetectorConfig {
  CfarConfig cfar;
  ReplicaConfig replica;
  double speed_gate_mps = -1.0;  // < 0: one unpadded speed resolution
  double nlos_boundary_range_m = 0.0;  // 0: keep all ranges

  double effective_speed_gate(const SystemConfig& cfg) const {
    return speed_gate_mps >= 0.0 ? speed_gate_mps : unpadded_speed_resolution_mps(cfg);
  }
};

/// Periodogram -> CFAR -> replica rejection -> static discard -> NLOS gate.
std::vector<Peak> detect_frame(const RadarImage& image, const SymbolMask& mask,
                               const DetectorConfig& det, double speed_gate_mps);

/// Synthesizes and senses every frame of a scene, returning one peak list per
/// frame. Reports progress through `progress` when set.
std::vector<std::vector<Peak>> sense_scene(const Scene& scene, const SystemConfig& cfg,
                                           const DetectorConfig& det,
                                           const std::function<void(std::size_t, std::size_t)>&
                                               progress = nullptr);

/// Senses every frame of a CSIF dataset.
std::vector<std::vector<Peak>> sense_dataset(CsifReader& reader, const SystemConfig& cfg,
                                             const DetectorConfig& det,
                                             const std::function<void(std::size_t, std::size_t)>&
                                                 progress = nullptr);

DetectorConfig load_detector_config(const std::string& path);
DetectorConfig parse_detector_config(const std::string& json_text);
KfConfig load_kf_config(const std::string& path);
KfConfig parse_kf_config(const std::string& json_text);
PhdConfig load_phd_config(const std::string& path);
PhdConfig parse_phd_config(const std::string& json_text);
ClutterConfig load_clutter_config(const std::string& path);
ClutterConfig parse_clutter_config(const std::string& json_text);

}  // namespace nlosd
