#include "nlosd/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nlosd/errors.hpp"

namespace nlosd {

std::vector<Peak> detect_frame(const RadarImage& image, const SymbolMask& mask,
                               const DetectorConfig& det, double speed_gate_mps) {
  const std::vector<CfarDetection> cells = cfar_detect(image, det.cfar);
  std::vector<Peak> peaks = reject_tdd_replicas(cells, image, mask, det.replica);
  peaks = discard_static(peaks, speed_gate_mps);
  return nlos_filter(peaks, det.nlos_boundary_range_m);
}

std::vector<std::vector<Peak>> sense_scene(
    const Scene& scene, const SystemConfig& cfg, const DetectorConfig& det,
    const std::function<void(std::size_t, std::size_t)>& progress) {
  validate_scene(scene, cfg);
  const AxisMap axes = axis_map(cfg);
  const double gate = det.effective_speed_gate(cfg);
  const std::size_t count = dataset_frame_count(scene, cfg);

  PeriodogramEngine engine(axes);
  std::vector<std::vector<Peak>> result(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = frame_noise_rng(scene, i);
    const CsiFrame frame = synthesize_csi(scene, cfg, i, rng);
    const RadarImage image = engine.compute(frame);
    result[i] = detect_frame(image, frame.mask, det, gate);
    if (progress) progress(i + 1, count);
  }
  return result;
}

std::vector<std::vector<Peak>> sense_dataset(
    CsifReader& reader, const SystemConfig& cfg, const DetectorConfig& det,
    const std::function<void(std::size_t, std::size_t)>& progress) {
  reader.check_compatible(cfg);
  const AxisMap axes = axis_map(cfg);
  const double gate = det.effective_speed_gate(cfg);
  const std::size_t count = reader.frame_count();

  PeriodogramEngine engine(axes);
  std::vector<std::vector<Peak>> result(count);
  for (std::size_t i = 0; i < count; ++i) {
    const CsiFrame frame = reader.frame(i, cfg.frame_duration_s);
    const RadarImage image = engine.compute(frame);
    result[i] = detect_frame(image, frame.mask, det, gate);
    if (progress) progress(i + 1, count);
  }
  return result;
}

namespace {

using nlohmann::json;

json parse_document(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

std::string slurp(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::string("cannot open ") + what + " '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& context) {
  for (const auto& item : j.items()) {
    bool found = false;
    for (const char* k : known) {
      if (item.key() == k) {
        found = true;
        break;
      }
    }
    if (!found) throw ConfigError(context + ": unknown key '" + item.key() + "'");
  }
}

template <typename T>
void read_field(const json& j, const char* key, T& value, const char* context) {
  if (!j.contains(key)) return;
  try {
    value = j[key].template get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(context) + "." + key + ": " + e.what());
  }
}

}  // namespace

DetectorConfig parse_detector_config(const std::string& text) {
  const json j = parse_document(text, "detector config");
  if (!j.is_object()) throw ConfigError("detector config: top level must be an object");
  reject_unknown_keys(j, {"cfar", "replica", "speed_gate_mps", "nlos_boundary_range_m"},
                      "detector config");
  DetectorConfig det;
  if (j.contains("cfar")) {
    const json& c = j["cfar"];
    reject_unknown_keys(c, {"training_cells", "guard_cells", "probability_of_false_alarm"},
                        "detector config.cfar");
    read_field(c, "training_cells", det.cfar.training_cells, "cfar");
    read_field(c, "guard_cells", det.cfar.guard_cells, "cfar");
    read_field(c, "probability_of_false_alarm", det.cfar.probability_of_false_alarm, "cfar");
  }
  if (j.contains("replica")) {
    const json& r = j["replica"];
    reject_unknown_keys(r, {"max_harmonics", "power_margin"}, "detector config.replica");
    read_field(r, "max_harmonics", det.replica.max_harmonics, "replica");
    read_field(r, "power_margin", det.replica.power_margin, "replica");
  }
  read_field(j, "speed_gate_mps", det.speed_gate_mps, "detector config");
  read_field(j, "nlos_boundary_range_m", det.nlos_boundary_range_m, "detector config");
  det.cfar.validate();
  return det;
}

DetectorConfig load_detector_config(const std::string& path) {
  return parse_detector_config(slurp(path, "detector config"));
}

KfConfig parse_kf_config(const std::string& text) {
  const json j = parse_document(text, "kf config");
  if (!j.is_object()) throw ConfigError("kf config: top level must be an object");
  reject_unknown_keys(j,
                      {"dt_s", "gating_distance", "min_confirm_time_s", "max_range_variance",
                       "process_noise_range_std", "process_noise_speed_std",
                       "measurement_noise_range_std", "measurement_noise_speed_std", "nlos",
                       "init_covariance_inflation"},
                      "kf config");
  KfConfig cfg;
  read_field(j, "dt_s", cfg.dt_s, "kf");
  read_field(j, "gating_distance", cfg.gating_distance, "kf");
  read_field(j, "min_confirm_time_s", cfg.min_confirm_time_s, "kf");
  read_field(j, "max_range_variance", cfg.max_range_variance, "kf");
  read_field(j, "process_noise_range_std", cfg.process_noise_range_std, "kf");
  read_field(j, "process_noise_speed_std", cfg.process_noise_speed_std, "kf");
  read_field(j, "measurement_noise_range_std", cfg.measurement_noise_range_std, "kf");
  read_field(j, "measurement_noise_speed_std", cfg.measurement_noise_speed_std, "kf");
  read_field(j, "nlos", cfg.nlos, "kf");
  read_field(j, "init_covariance_inflation", cfg.init_covariance_inflation, "kf");
  cfg.validate();
  return cfg;
}

KfConfig load_kf_config(const std::string& path) {
  return parse_kf_config(slurp(path, "kf config"));
}

PhdConfig parse_phd_config(const std::string& text) {
  const json j = parse_document(text, "phd config");
  if (!j.is_object()) throw ConfigError("phd config: top level must be an object");
  reject_unknown_keys(j,
                      {"dt_s", "nlos", "survival_probability", "detection_probability",
                       "birth_weight", "birth_covariance_factor", "clutter_intensity",
                       "merge_radius", "prune_weight_threshold", "max_components",
                       "process_noise_range_std", "process_noise_speed_std",
                       "measurement_noise_range_std", "measurement_noise_speed_std"},
                      "phd config");
  PhdConfig cfg;
  read_field(j, "dt_s", cfg.dt_s, "phd");
  read_field(j, "nlos", cfg.nlos, "phd");
  read_field(j, "survival_probability", cfg.survival_probability, "phd");
  read_field(j, "detection_probability", cfg.detection_probability, "phd");
  read_field(j, "birth_weight", cfg.birth_weight, "phd");
  read_field(j, "birth_covariance_factor", cfg.birth_covariance_factor, "phd");
  read_field(j, "clutter_intensity", cfg.clutter_intensity, "phd");
  read_field(j, "merge_radius", cfg.merge_radius, "phd");
  read_field(j, "prune_weight_threshold", cfg.prune_weight_threshold, "phd");
  read_field(j, "max_components", cfg.max_components, "phd");
  read_field(j, "process_noise_range_std", cfg.process_noise_range_std, "phd");
  read_field(j, "process_noise_speed_std", cfg.process_noise_speed_std, "phd");
  read_field(j, "measurement_noise_range_std", cfg.measurement_noise_range_std, "phd");
  read_field(j, "measurement_noise_speed_std", cfg.measurement_noise_speed_std, "phd");
  cfg.validate();
  return cfg;
}

PhdConfig load_phd_config(const std::string& path) {
  return parse_phd_config(slurp(path, "phd config"));
}

ClutterConfig parse_clutter_config(const std::string& text) {
  const json j = parse_document(text, "clutter config");
  if (!j.is_object()) throw ConfigError("clutter config: top level must be an object");
  reject_unknown_keys(
      j, {"rate", "range_min_m", "range_max_m", "speed_min_mps", "speed_max_mps", "seed"},
      "clutter config");
  ClutterConfig cfg;
  read_field(j, "rate", cfg.rate, "clutter");
  read_field(j, "range_min_m", cfg.range_min_m, "clutter");
  read_field(j, "range_max_m", cfg.range_max_m, "clutter");
  read_field(j, "speed_min_mps", cfg.speed_min_mps, "clutter");
  read_field(j, "speed_max_mps", cfg.speed_max_mps, "clutter");
  read_field(j, "seed", cfg.seed, "clutter");
  cfg.validate();
  return cfg;
}

ClutterConfig load_clutter_config(const std::string& path) {
  return parse_clutter_config(slurp(path, "clutter config"));
}

}  // namespace nlosd
