#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nlosd/motion.hpp"
#include "nlosd/peaks.hpp"

namespace nlosd {

struct KfConfig {
  double dt_s = 10e-3;
  double gating_distance = 5.0;        // d~, normalized (Mahalanobis)
  double min_confirm_time_s = 60e-3;   // t_c
  double max_range_variance = 25.0;    // sigma~^2_r, m^2; the ROC sweep knob
  double process_noise_range_std = 3.5;
  double process_noise_speed_std = 1.8;
  double measurement_noise_range_std = 1.8;
  double measurement_noise_speed_std = 1.8;
  bool nlos = true;
  double init_covariance_inflation = 4.0;

  Eigen::Matrix2d transition() const { return transition_matrix(dt_s, nlos); }
  Eigen::Matrix2d process_noise() const {
    return diagonal_covariance(process_noise_range_std, process_noise_speed_std);
  }
  Eigen::Matrix2d measurement_noise() const {
    return diagonal_covariance(measurement_noise_range_std, measurement_noise_speed_std);
  }
  void validate() const;
};

enum class TrackStatus { Tentative, Confirmed, Deleted };

struct Track {
  Eigen::Vector2d state = Eigen::Vector2d::Zero();  // [range_m, speed_mps]
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
  std::uint64_t steps_active = 0;  // update/coast steps since initialization
  double timer_s = 0.0;            // steps_active * dt, kept exact
  TrackStatus status = TrackStatus::Tentative;
  std::uint64_t id = 0;
};

/// Time update: x <- F x, P <- F P F^T + Q.
Track predict(const Track& track, const KfConfig& cfg);

struct AssociationResult {
  std::vector<int> peak_for_track;   // index into peaks, -1 when gated out
  std::vector<double> distance;      // normalized distance of the chosen peak
  std::vector<std::size_t> leftover_peaks;  // claimed by no track
};

/// Per-track nearest-neighbor selection by Mahalanobis distance with
/// innovation covariance S = P + R. One peak may serve several tracks;
/// distances above the gate leave the track coasting. Ties break to the
/// lower peak index.
AssociationResult associate(const std::vector<Track>& tracks, std::span<const Peak> peaks,
                            const KfConfig& cfg);

/// Measurement update with identity observation matrix; advances the track
/// timer. Covariance is re-symmetrized every step.
Track update(const Track& track, const Peak& peak, const KfConfig& cfg);

/// Coasting step: keeps the predicted state, advances the timer.
Track coast(const Track& track, const KfConfig& cfg);

struct ConfirmationResult {
  std::vector<Track> survivors;   // tentative + confirmed
  std::vector<Track> confirmed;   // subset of survivors
  std::vector<Track> deleted;
};

/// Deletes tracks whose range variance exceeds the threshold; confirms tracks
/// alive for at least t_c (the range variance never exceeded the threshold
/// while they lived, since exceeding it deletes immediately).
ConfirmationResult confirm_or_delete(const std::vector<Track>& tracks, const KfConfig& cfg);

struct KfStepResult {
  bool intruder_present = false;  // latched: any confirmation so far
  std::vector<Track> confirmed;
  std::size_t active_tracks = 0;
};

/// Sequential KF track-confirmation filter over pre-filtered moving peaks.
class KalmanTracker {
 public:
  explicit KalmanTracker(const KfConfig& cfg);

  /// One frame: predict, associate, update/coast, initialize leftovers,
  /// confirm or delete. The intrusion decision latches once any track
  /// confirms.
  KfStepResult step(std::span<const Peak> peaks);

  const std::vector<Track>& tracks() const { return tracks_; }
  bool alarm_latched() const { return alarm_latched_; }
  void reset();

 private:
  KfConfig cfg_;
  std::vector<Track> tracks_;
  std::uint64_t next_id_ = 1;
  bool alarm_latched_ = false;
};

/// Track log CSV: frame_index,track_id,status,range_m,speed_mps,var_rr,var_vv.
void write_track_log_csv(const std::string& path,
                         const std::vector<std::vector<Track>>& per_frame_tracks);

}  // namespace nlosd
