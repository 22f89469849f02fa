#pragma once

#include <Eigen/Dense>

namespace nlosd {

/// Constant-velocity transition over the [range, speed] state. The bounce of
/// an NLOS path reverses the measured range-rate direction, which shows up as
/// a negative coupling term; LOS targets use the positive sign.
inline Eigen::Matrix2d transition_matrix(double dt_s, bool nlos) {
  Eigen::Matrix2d f;
  f << 1.0, (nlos ? -dt_s : dt_s), 0.0, 1.0;
  return f;
}

inline Eigen::Matrix2d diagonal_covariance(double range_std, double speed_std) {
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  m(0, 0) = range_std * range_std;
  m(1, 1) = speed_std * speed_std;
  return m;
}

/// Forces exact symmetry after covariance updates.
inline Eigen::Matrix2d symmetrize(const Eigen::Matrix2d& p) {
  return 0.5 * (p + p.transpose());
}

}  // namespace nlosd
