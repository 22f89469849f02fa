#pragma once

#include <string>
#include <variant>
#include <vector>

#include "nlosd/gm_phd.hpp"
#include "nlosd/kalman_tracker.hpp"
#include "nlosd/peaks.hpp"

namespace nlosd {

/// Sliding sub-measurement geometry: windows of ceil(window_s / frame
/// interval) frames, shifted by one frame.
struct WindowSpec {
  double window_s = 0.3;          // T~_m
  double frame_interval_s = 10e-3;  // T_f

  std::size_t window_frames() const;
  void validate() const;
};

struct WindowRange {
  std::size_t begin = 0;  // first frame
  std::size_t end = 0;    // one past last
};

/// All frame_count - window + 1 windows. Throws ConfigError when the stream
/// is shorter than one window.
std::vector<WindowRange> split_windows(std::size_t frame_count, const WindowSpec& spec);

using TrackerParams = std::variant<KfConfig, PhdConfig>;

/// Runs a freshly initialized tracker over one window of the peak stream and
/// reports whether it declared an intruder (KF: any confirmed track; PHD:
/// cardinality >= 1 at any step).
bool classify_window(const std::vector<std::vector<Peak>>& peak_stream, const WindowRange& window,
                     const TrackerParams& params);

enum class TrackerKind { Kf, Phd };

struct RocPoint {
  double parameter = 0.0;  // w_B for PHD, sigma~^2_r for KF
  double fn_rate = 0.0;    // 1 - TP rate over the true-positive windows
  double fp_rate = 0.0;
  std::size_t window_count_tp = 0;
  std::size_t window_count_fp = 0;
};

/// Sweeps the tracker's confirmation knob over `param_grid`: for every value
/// the FN rate over the TP stream's windows and the FP rate over the FP
/// stream's windows. Output is sorted by parameter value.
std::vector<RocPoint> roc_sweep(const std::vector<std::vector<Peak>>& tp_stream,
                                const std::vector<std::vector<Peak>>& fp_stream,
                                TrackerKind tracker, const TrackerParams& base_params,
                                const std::vector<double>& param_grid, const WindowSpec& spec);

/// Fraction of windows classified as intruder-present.
double alarm_rate(const std::vector<std::vector<Peak>>& peak_stream,
                  const std::vector<WindowRange>& windows, const TrackerParams& params);

/// ROC CSV: tracker,param,tm_ms,fn_rate,fp_rate,n_tp_windows,n_fp_windows.
void write_roc_csv(const std::string& path, TrackerKind tracker, double window_ms,
                   const std::vector<RocPoint>& points);

/// Plot data, one file per curve: two columns x (fp_rate) and y (fn_rate).
void write_curve_data(const std::string& path, const std::vector<RocPoint>& points);

TrackerParams with_parameter(TrackerKind tracker, const TrackerParams& base, double value);

}  // namespace nlosd
