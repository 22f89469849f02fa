#include "nlosd/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "nlosd/errors.hpp"

namespace nlosd {

std::size_t WindowSpec::window_frames() const {
  // Guarded ceil: 300 ms / 10 ms must give exactly 30 frames.
  return static_cast<std::size_t>(std::ceil(window_s / frame_interval_s - 1e-6));
}

void WindowSpec::validate() const {
  if (frame_interval_s <= 0.0) throw ConfigError("window: frame_interval_s must be positive");
  if (window_s < frame_interval_s) {
    throw ConfigError("window: window_s must be at least one frame interval");
  }
}

std::vector<WindowRange> split_windows(std::size_t frame_count, const WindowSpec& spec) {
  spec.validate();
  const std::size_t frames = spec.window_frames();
  if (frame_count < frames) {
    throw ConfigError("split_windows: stream shorter than one window");
  }
  std::vector<WindowRange> windows;
  windows.reserve(frame_count - frames + 1);
  for (std::size_t begin = 0; begin + frames <= frame_count; ++begin) {
    windows.push_back({begin, begin + frames});
  }
  return windows;
}

bool classify_window(const std::vector<std::vector<Peak>>& peak_stream, const WindowRange& window,
                     const TrackerParams& params) {
  if (std::holds_alternative<KfConfig>(params)) {
    KalmanTracker tracker(std::get<KfConfig>(params));
    for (std::size_t i = window.begin; i < window.end; ++i) {
      if (tracker.step(peak_stream[i]).intruder_present) return true;
    }
    return false;
  }
  GmPhdFilter filter(std::get<PhdConfig>(params));
  for (std::size_t i = window.begin; i < window.end; ++i) {
    if (filter.step(peak_stream[i]).intruder_present) return true;
  }
  return false;
}

double alarm_rate(const std::vector<std::vector<Peak>>& peak_stream,
                  const std::vector<WindowRange>& windows, const TrackerParams& params) {
  if (windows.empty()) return 0.0;
  std::size_t alarms = 0;
  for (const WindowRange& w : windows) {
    if (classify_window(peak_stream, w, params)) ++alarms;
  }
  return static_cast<double>(alarms) / static_cast<double>(windows.size());
}

TrackerParams with_parameter(TrackerKind tracker, const TrackerParams& base, double value) {
  if (tracker == TrackerKind::Kf) {
    KfConfig cfg = std::get<KfConfig>(base);
    cfg.max_range_variance = value;
    return cfg;
  }
  PhdConfig cfg = std::get<PhdConfig>(base);
  cfg.birth_weight = value;
  return cfg;
}

std::vector<RocPoint> roc_sweep(const std::vector<std::vector<Peak>>& tp_stream,
                                const std::vector<std::vector<Peak>>& fp_stream,
                                TrackerKind tracker, const TrackerParams& base_params,
                                const std::vector<double>& param_grid, const WindowSpec& spec) {
  const std::vector<WindowRange> tp_windows = split_windows(tp_stream.size(), spec);
  const std::vector<WindowRange> fp_windows = split_windows(fp_stream.size(), spec);

  std::vector<double> grid = param_grid;
  std::sort(grid.begin(), grid.end());

  std::vector<RocPoint> points;
  points.reserve(grid.size());
  for (double value : grid) {
    const TrackerParams params = with_parameter(tracker, base_params, value);
    RocPoint p;
    p.parameter = value;
    p.fn_rate = 1.0 - alarm_rate(tp_stream, tp_windows, params);
    p.fp_rate = alarm_rate(fp_stream, fp_windows, params);
    p.window_count_tp = tp_windows.size();
    p.window_count_fp = fp_windows.size();
    points.push_back(p);
  }
  return points;
}

void write_roc_csv(const std::string& path, TrackerKind tracker, double window_ms,
                   const std::vector<RocPoint>& points) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << "tracker,param,tm_ms,fn_rate,fp_rate,n_tp_windows,n_fp_windows\n";
  const char* name = tracker == TrackerKind::Kf ? "kf" : "phd";
  char line[200];
  for (const RocPoint& p : points) {
    std::snprintf(line, sizeof(line), "%s,%.9g,%.9g,%.9g,%.9g,%zu,%zu\n", name, p.parameter,
                  window_ms, p.fn_rate, p.fp_rate, p.window_count_tp, p.window_count_fp);
    out << line;
  }
  if (!out) throw FormatError("write failure on '" + path + "'");
}

void write_curve_data(const std::string& path, const std::vector<RocPoint>& points) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << "fp_rate,fn_rate\n";
  char line[96];
  for (const RocPoint& p : points) {
    std::snprintf(line, sizeof(line), "%.9g,%.9g\n", p.fp_rate, p.fn_rate);
    out << line;
  }
  if (!out) throw FormatError("write failure on '" + path + "'");
}

}  // namespace nlosd
