#include "nlosd/kalman_tracker.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "nlosd/errors.hpp"

namespace nlosd {

void KfConfig::validate() const {
  if (process_noise_range_std <= 0.0 || process_noise_speed_std <= 0.0 ||
      measurement_noise_range_std <= 0.0 || measurement_noise_speed_std <= 0.0) {
    throw ConfigError("kf: noise standard deviations must be positive");
  }
  if (gating_distance <= 0.0) throw ConfigError("kf: gating_distance must be positive");
  if (min_confirm_time_s < 0.0) throw ConfigError("kf: min_confirm_time_s must be >= 0");
  if (max_range_variance <= 0.0) throw ConfigError("kf: max_range_variance must be positive");
  if (dt_s < 0.0) throw ConfigError("kf: dt_s must be >= 0");
}

Track predict(const Track& track, const KfConfig& cfg) {
  const Eigen::Matrix2d f = cfg.transition();
  Track out = track;
  out.state = f * track.state;
  out.covariance = symmetrize(f * track.covariance * f.transpose() + cfg.process_noise());
  return out;
}

AssociationResult associate(const std::vector<Track>& tracks, std::span<const Peak> peaks,
                            const KfConfig& cfg) {
  AssociationResult result;
  result.peak_for_track.assign(tracks.size(), -1);
  result.distance.assign(tracks.size(), std::numeric_limits<double>::infinity());
  std::vector<char> claimed(peaks.size(), 0);

  const Eigen::Matrix2d r = cfg.measurement_noise();
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    const Eigen::Matrix2d s = tracks[t].covariance + r;
    const Eigen::Matrix2d s_inv = s.inverse();
    double best = std::numeric_limits<double>::infinity();
    int best_index = -1;
    for (std::size_t p = 0; p < peaks.size(); ++p) {
      Eigen::Vector2d innovation(peaks[p].range_m - tracks[t].state(0),
                                 peaks[p].speed_mps - tracks[t].state(1));
      const double d2 = innovation.dot(s_inv * innovation);
      const double d = std::sqrt(std::max(d2, 0.0));
      if (d < best) {  // ties keep the lower peak index
        best = d;
        best_index = static_cast<int>(p);
      }
    }
    if (best_index >= 0 && best <= cfg.gating_distance) {
      result.peak_for_track[t] = best_index;
      result.distance[t] = best;
      claimed[static_cast<std::size_t>(best_index)] = 1;
    }
  }
  for (std::size_t p = 0; p < peaks.size(); ++p) {
    if (!claimed[p]) result.leftover_peaks.push_back(p);
  }
  return result;
}

Track update(const Track& track, const Peak& peak, const KfConfig& cfg) {
  const Eigen::Matrix2d r = cfg.measurement_noise();
  const Eigen::Matrix2d s = track.covariance + r;
  const Eigen::Matrix2d gain = track.covariance * s.inverse();
  const Eigen::Vector2d innovation(peak.range_m - track.state(0),
                                   peak.speed_mps - track.state(1));
  Track out = track;
  out.state = track.state + gain * innovation;
  const Eigen::Matrix2d identity = Eigen::Matrix2d::Identity();
  out.covariance = symmetrize((identity - gain) * track.covariance);
  out.steps_active = track.steps_active + 1;
  out.timer_s = static_cast<double>(out.steps_active) * cfg.dt_s;
  return out;
}

Track coast(const Track& track, const KfConfig& cfg) {
  Track out = track;
  out.steps_active = track.steps_active + 1;
  out.timer_s = static_cast<double>(out.steps_active) * cfg.dt_s;
  return out;
}

ConfirmationResult confirm_or_delete(const std::vector<Track>& tracks, const KfConfig& cfg) {
  ConfirmationResult result;
  for (const Track& t : tracks) {
    if (t.covariance(0, 0) > cfg.max_range_variance) {
      Track dead = t;
      dead.status = TrackStatus::Deleted;
      result.deleted.push_back(dead);
      continue;
    }
    Track alive = t;
    if (alive.timer_s >= cfg.min_confirm_time_s) {
      alive.status = TrackStatus::Confirmed;
      result.confirmed.push_back(alive);
    }
    result.survivors.push_back(alive);
  }
  return result;
}

KalmanTracker::KalmanTracker(const KfConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

void KalmanTracker::reset() {
  tracks_.clear();
  next_id_ = 1;
  alarm_latched_ = false;
}

KfStepResult KalmanTracker::step(std::span<const Peak> peaks) {
  for (Track& t : tracks_) t = predict(t, cfg_);

  const AssociationResult assoc = associate(tracks_, peaks, cfg_);
  for (std::size_t t = 0; t < tracks_.size(); ++t) {
    if (assoc.peak_for_track[t] >= 0) {
      tracks_[t] = update(tracks_[t], peaks[static_cast<std::size_t>(assoc.peak_for_track[t])],
                          cfg_);
    } else {
      tracks_[t] = coast(tracks_[t], cfg_);
    }
  }

  // Unclaimed peaks seed new tracks; the seeding peak does not count toward
  // the confirmation timer.
  for (std::size_t p : assoc.leftover_peaks) {
    Track fresh;
    fresh.state = Eigen::Vector2d(peaks[p].range_m, peaks[p].speed_mps);
    fresh.covariance = cfg_.init_covariance_inflation * cfg_.measurement_noise();
    fresh.steps_active = 0;
    fresh.timer_s = 0.0;
    fresh.status = TrackStatus::Tentative;
    fresh.id = next_id_++;
    tracks_.push_back(fresh);
  }

  ConfirmationResult conf = confirm_or_delete(tracks_, cfg_);
  tracks_ = conf.survivors;

  KfStepResult result;
  result.confirmed = std::move(conf.confirmed);
  result.active_tracks = tracks_.size();
  if (!result.confirmed.empty()) alarm_latched_ = true;
  result.intruder_present = alarm_latched_;
  return result;
}

void write_track_log_csv(const std::string& path,
                         const std::vector<std::vector<Track>>& per_frame_tracks) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << "frame_index,track_id,status,range_m,speed_mps,var_rr,var_vv\n";
  for (std::size_t i = 0; i < per_frame_tracks.size(); ++i) {
    for (const Track& t : per_frame_tracks[i]) {
      const char* status = t.status == TrackStatus::Confirmed
                               ? "confirmed"
                               : (t.status == TrackStatus::Deleted ? "deleted" : "tentative");
      out << i << ',' << t.id << ',' << status << ',' << t.state(0) << ',' << t.state(1) << ','
          << t.covariance(0, 0) << ',' << t.covariance(1, 1) << "\n";
    }
  }
  if (!out) throw FormatError("write failure on '" + path + "'");
}

}  // namespace nlosd
