#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlosd/system.hpp"

namespace nlosd {

enum class ScattererKind { Static, Moving };

/// One point reflector. A moving scatterer either keeps a constant radial
/// speed or paces through `waypoints_m` ping-pong style at |radial_speed_mps|,
/// standing still for `turn_dwell_s` at every waypoint it reaches. For NLOS
/// scatterers the range is the apparent (total path / 2) range and the
/// measured Doppler sign is reversed by the bounce.
struct Scatterer {
  ScattererKind kind = ScattererKind::Static;
  double initial_range_m = 0.0;
  double radial_speed_mps = 0.0;
  std::vector<double> waypoints_m;  // empty: constant-velocity motion
  double turn_dwell_s = 0.2;
  double amplitude = 1.0;
  std::optional<double> phase_rad;  // randomized per scatterer when unset
  bool nlos = false;
};

struct Scene {
  std::vector<Scatterer> scatterers;
  double noise_power = 0.0;  // E|w|^2 per CSI cell, linear
  double nlos_boundary_range_m = 0.0;
  double duration_s = 0.0;  // T_m
  std::uint64_t seed = 0;
};

struct TrajectoryState {
  double range_m = 0.0;
  double speed_mps = 0.0;
};

/// Range and signed radial speed of a scatterer at time t. Piecewise linear;
/// speed is exactly 0 while dwelling at a waypoint (turn instants included).
/// Throws std::out_of_range for t < 0.
TrajectoryState trajectory_state(const Scatterer& scatterer, double t_s);

/// Validates scene and scatterer bounds against the grid geometry.
/// Throws ConfigError naming the offending field.
void validate_scene(const Scene& scene, const SystemConfig& cfg);

/// Loads a Scene from a JSON document; unknown keys are rejected.
Scene load_scene(const std::string& path);
Scene parse_scene(const std::string& json_text);

}  // namespace nlosd
