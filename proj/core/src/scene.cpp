#include "nlosd/scene.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "nlosd/errors.hpp"

namespace nlosd {

namespace {

// Ping-pong leg iterator over the waypoint list: 0,1,...,n-1,n-2,...,0,1,...
std::size_t next_waypoint(std::size_t current, int& direction, std::size_t count) {
  if (count < 2) return current;
  if (direction > 0 && current + 1 == count) direction = -1;
  if (direction < 0 && current == 0) direction = 1;
  return direction > 0 ? current + 1 : current - 1;
}

}  // namespace

TrajectoryState trajectory_state(const Scatterer& sc, double t_s) {
  if (t_s < 0.0) throw std::out_of_range("trajectory_state: t < 0");
  if (sc.kind == ScattererKind::Static) {
    return {sc.initial_range_m, 0.0};
  }
  if (sc.waypoints_m.size() < 2) {
    return {sc.initial_range_m + sc.radial_speed_mps * t_s, sc.radial_speed_mps};
  }

  const double speed = std::abs(sc.radial_speed_mps);
  if (speed <= 0.0) {
    return {sc.waypoints_m.front(), 0.0};
  }
  double t = t_s;
  std::size_t wp = 0;
  int direction = 1;
  double range = sc.waypoints_m[0];
  while (true) {
    const std::size_t target = next_waypoint(wp, direction, sc.waypoints_m.size());
    const double goal = sc.waypoints_m[target];
    const double leg = std::abs(goal - range) / speed;
    if (t < leg) {
      const double signed_speed = goal > range ? speed : -speed;
      return {range + signed_speed * t, signed_speed};
    }
    t -= leg;
    range = goal;
    wp = target;
    // Dwell covers its boundary instants, so speed is 0 exactly at a turn.
    if (t <= sc.turn_dwell_s) {
      return {range, 0.0};
    }
    t -= sc.turn_dwell_s;
  }
}

void validate_scene(const Scene& scene, const SystemConfig& cfg) {
  const AxisMap axes = axis_map(cfg);
  double max_range = 0.0;
  bool any_nlos = false;
  for (std::size_t i = 0; i < scene.scatterers.size(); ++i) {
    const Scatterer& sc = scene.scatterers[i];
    const std::string tag = "scatterers[" + std::to_string(i) + "]";
    if (sc.kind == ScattererKind::Static && sc.radial_speed_mps != 0.0) {
      throw ConfigError(tag + ".radial_speed_mps: static scatterer must have speed 0");
    }
    if (std::abs(sc.radial_speed_mps) >= axes.unambiguous_speed_mps / 2.0) {
      throw ConfigError(tag + ".radial_speed_mps: |speed| must be below " +
                        std::to_string(axes.unambiguous_speed_mps / 2.0) + " m/s");
    }
    if (sc.waypoints_m.size() == 1) {
      throw ConfigError(tag + ".waypoints_m: need at least two waypoints");
    }
    for (std::size_t w = 1; w < sc.waypoints_m.size(); ++w) {
      if (sc.waypoints_m[w] == sc.waypoints_m[w - 1]) {
        throw ConfigError(tag + ".waypoints_m: consecutive waypoints must differ");
      }
    }
    if (sc.kind == ScattererKind::Moving && !sc.waypoints_m.empty() &&
        sc.radial_speed_mps == 0.0) {
      throw ConfigError(tag + ".radial_speed_mps: waypoint motion needs a nonzero speed");
    }
    if (sc.turn_dwell_s < 0.0) throw ConfigError(tag + ".turn_dwell_s must be >= 0");
    if (sc.amplitude < 0.0) throw ConfigError(tag + ".amplitude must be >= 0");

    // Every range the scatterer can visit must stay on the grid.
    std::vector<double> ranges = sc.waypoints_m;
    if (ranges.empty()) {
      ranges.push_back(sc.initial_range_m);
      if (sc.kind == ScattererKind::Moving) {
        ranges.push_back(sc.initial_range_m + sc.radial_speed_mps * scene.duration_s);
      }
    }
    for (double r : ranges) {
      if (r <= 0.0 || r >= axes.unambiguous_range_m) {
        throw ConfigError(tag + ".initial_range_m/waypoints_m: range " + std::to_string(r) +
                          " outside (0, " + std::to_string(axes.unambiguous_range_m) + ")");
      }
      max_range = std::max(max_range, r);
    }
    any_nlos = any_nlos || sc.nlos;
  }
  if (scene.noise_power < 0.0) throw ConfigError("noise_power must be >= 0");
  if (scene.duration_s < 0.0) throw ConfigError("duration_s must be >= 0");
  if (any_nlos) {
    if (scene.nlos_boundary_range_m <= 0.0) {
      throw ConfigError("nlos_boundary_range_m must be positive when NLOS scatterers exist");
    }
    if (scene.nlos_boundary_range_m >= max_range) {
      throw ConfigError("nlos_boundary_range_m must be below the farthest scatterer range");
    }
  }
}

namespace {

using nlohmann::json;

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

Scatterer parse_scatterer(const json& j, std::size_t index) {
  const std::string context = "scene.scatterers[" + std::to_string(index) + "]";
  if (!j.is_object()) throw ConfigError(context + ": must be an object");
  reject_unknown_keys(j,
                      {"kind", "initial_range_m", "radial_speed_mps", "waypoints_m",
                       "turn_dwell_s", "amplitude", "phase_rad", "nlos"},
                      context);
  Scatterer sc;
  try {
    const std::string kind = j.value("kind", "static");
    if (kind == "static") {
      sc.kind = ScattererKind::Static;
    } else if (kind == "moving") {
      sc.kind = ScattererKind::Moving;
    } else {
      throw ConfigError(context + ".kind: expected 'static' or 'moving'");
    }
    sc.initial_range_m = j.value("initial_range_m", 0.0);
    sc.radial_speed_mps = j.value("radial_speed_mps", 0.0);
    if (j.contains("waypoints_m")) {
      sc.waypoints_m = j["waypoints_m"].get<std::vector<double>>();
      if (!sc.waypoints_m.empty()) sc.initial_range_m = sc.waypoints_m.front();
    }
    sc.turn_dwell_s = j.value("turn_dwell_s", 0.2);
    sc.amplitude = j.value("amplitude", 1.0);
    if (j.contains("phase_rad")) sc.phase_rad = j["phase_rad"].get<double>();
    sc.nlos = j.value("nlos", false);
  } catch (const json::exception& e) {
    throw ConfigError(context + ": " + e.what());
  }
  return sc;
}

}  // namespace

Scene parse_scene(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scene: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("scene: top level must be an object");
  reject_unknown_keys(
      j, {"scatterers", "noise_power", "nlos_boundary_range_m", "duration_s", "seed"}, "scene");
  Scene scene;
  try {
    if (j.contains("scatterers")) {
      const json& arr = j["scatterers"];
      if (!arr.is_array()) throw ConfigError("scene.scatterers: must be an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        scene.scatterers.push_back(parse_scatterer(arr[i], i));
      }
    }
    scene.noise_power = j.value("noise_power", 0.0);
    scene.nlos_boundary_range_m = j.value("nlos_boundary_range_m", 0.0);
    scene.duration_s = j.value("duration_s", 0.0);
    scene.seed = j.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scene: ") + e.what());
  }
  return scene;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scene '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

}  // namespace nlosd
