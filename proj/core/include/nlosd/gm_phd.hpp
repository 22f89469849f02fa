#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "nlosd/motion.hpp"
#include "nlosd/peaks.hpp"

namespace nlosd {

struct GaussianComponent {
  double weight = 0.0;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();  // [range_m, speed_mps]
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
};

/// Weighted Gaussian mixture representing the PHD intensity; its integral
/// (the total weight) approximates the expected number of targets.
struct GaussianMixture {
  std::vector<GaussianComponent> components;

  double total_weight() const;
  std::size_t size() const { return components.size(); }
};

struct PhdConfig {
  double dt_s = 10e-3;
  bool nlos = true;
  double survival_probability = 0.98;   // p_S
  double detection_probability = 0.9;   // p_D
  double birth_weight = 1e-5;           // w_B; the ROC sweep knob
  double birth_covariance_factor = 4.0;  // birth covariance = factor * R
  double clutter_intensity = 4.29e-4;   // kappa = lambda/V of the default clutter space
  double merge_radius = 0.7;            // squared-Mahalanobis merge threshold
  double prune_weight_threshold = 1e-6;
  std::size_t max_components = 30;
  double process_noise_range_std = 3.5;
  double process_noise_speed_std = 1.8;
  double measurement_noise_range_std = 1.8;
  double measurement_noise_speed_std = 1.8;

  Eigen::Matrix2d transition() const { return transition_matrix(dt_s, nlos); }
  Eigen::Matrix2d process_noise() const {
    return diagonal_covariance(process_noise_range_std, process_noise_speed_std);
  }
  Eigen::Matrix2d measurement_noise() const {
    return diagonal_covariance(measurement_noise_range_std, measurement_noise_speed_std);
  }
  Eigen::Matrix2d birth_covariance() const {
    return birth_covariance_factor * measurement_noise();
  }
  void validate() const;
};

/// Survival-weighted time update: (w, m, P) -> (p_S w, F m, Q + F P F^T).
GaussianMixture phd_predict(const GaussianMixture& gm, const PhdConfig& cfg);

/// Measurement-driven birth: one component of weight w_B per element of the
/// previous scan's measurement set.
GaussianMixture phd_add_birth(const GaussianMixture& gm, std::span<const Peak> previous_scan,
                              const PhdConfig& cfg);

/// Measurement update: missed-detection copies weighted by (1 - p_D) plus,
/// per measurement z, Kalman-updated components with weights
/// p_D w q(z) / (kappa + p_D sum_j w_j q_j(z)).
GaussianMixture phd_update(const GaussianMixture& gm, std::span<const Peak> measurements,
                           const PhdConfig& cfg);

/// Drops low-weight components, greedily merges clusters within the merge
/// radius around the heaviest member into moment-matched Gaussians, and caps
/// the component count.
GaussianMixture phd_prune_merge(const GaussianMixture& gm, const PhdConfig& cfg);

struct PhdExtraction {
  std::vector<Eigen::Vector2d> states;
  std::size_t cardinality = 0;  // P^ = round(total weight), clamped to [0, J]
};

/// States of the round(total weight) heaviest components; extraction order is
/// stable under permutation of equal-weight components.
PhdExtraction phd_extract(const GaussianMixture& gm);

struct PhdStepResult {
  bool intruder_present = false;  // latched: P^ >= 1 at any step so far
  PhdExtraction extraction;
  double total_weight = 0.0;
};

/// Sequential GM-PHD filter over pre-filtered moving peaks.
class GmPhdFilter {
 public:
  explicit GmPhdFilter(const PhdConfig& cfg);

  /// One frame: predict, birth from the previous scan, update, prune/merge,
  /// extract. The intrusion decision latches once the cardinality reaches 1.
  PhdStepResult step(std::span<const Peak> peaks);

  const GaussianMixture& mixture() const { return gm_; }
  bool alarm_latched() const { return alarm_latched_; }
  void reset();

 private:
  PhdConfig cfg_;
  GaussianMixture gm_;
  std::vector<Peak> previous_scan_;
  bool alarm_latched_ = false;
};

/// Per-frame estimate CSV: frame_index,cardinality,range_0,speed_0,...
void write_phd_estimates_csv(const std::string& path,
                             const std::vector<PhdExtraction>& per_frame);

}  // namespace nlosd
