#include "nlosd/peaks.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "nlosd/errors.hpp"

namespace nlosd {

std::vector<double> replica_power_ratios(const SymbolMask& mask, int max_harmonics) {
  const std::size_t period = mask.period > 0 ? mask.period : SymbolMask::detect_period(mask.usable);
  const std::size_t harmonics =
      max_harmonics > 0 ? static_cast<std::size_t>(max_harmonics) : (period > 0 ? period - 1 : 0);
  std::vector<double> ratios(harmonics, 0.0);
  if (period <= 1 || mask.usable.empty()) return ratios;

  // DFS of one gating period; |G_k|^2 / |G_0|^2 is the power of the k-th
  // spectral replica relative to its parent peak.
  std::vector<std::complex<double>> coeff(period);
  for (std::size_t k = 0; k < period; ++k) {
    std::complex<double> sum(0.0, 0.0);
    for (std::size_t m = 0; m < period; ++m) {
      if (!mask.usable[m]) continue;
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) *
                           static_cast<double>(m) / static_cast<double>(period);
      sum += std::polar(1.0, angle);
    }
    coeff[k] = sum;
  }
  const double dc_power = std::norm(coeff[0]);
  if (dc_power <= 0.0) return ratios;
  for (std::size_t k = 1; k <= ratios.size(); ++k) {
    ratios[k - 1] = k < period ? std::norm(coeff[k]) / dc_power : 0.0;
  }
  return ratios;
}

namespace {

long circular_distance(long a, long b, long extent) {
  long d = std::abs(a - b) % extent;
  return std::min(d, extent - d);
}

Peak to_peak(const CfarDetection& cell, const AxisMap& axes) {
  Peak p;
  p.range_bin = static_cast<long>(cell.range_bin);
  p.doppler_bin = static_cast<long>(cell.col) - static_cast<long>(axes.padded_cols / 2);
  p.range_m = static_cast<double>(cell.range_bin) * axes.range_per_bin_m;
  p.speed_mps = static_cast<double>(p.doppler_bin) * axes.speed_per_bin_mps;
  p.power = cell.power;
  return p;
}

}  // namespace

std::vector<Peak> reject_tdd_replicas(const std::vector<CfarDetection>& cells,
                                      const RadarImage& image, const SymbolMask& mask,
                                      const ReplicaConfig& cfg) {
  std::vector<Peak> peaks;
  if (cells.empty()) return peaks;

  const std::vector<double> ratios = replica_power_ratios(mask, cfg.max_harmonics);
  bool any_replicas = false;
  for (double r : ratios) any_replicas = any_replicas || r > 0.0;
  if (!any_replicas) {
    peaks.reserve(cells.size());
    for (const CfarDetection& c : cells) peaks.push_back(to_peak(c, image.axes));
    return peaks;
  }

  const long cols = static_cast<long>(image.axes.padded_cols);
  const long rows = static_cast<long>(image.axes.padded_rows);
  const double spacing = static_cast<double>(image.axes.padded_cols) /
                         static_cast<double>(mask.period);

  std::vector<char> suppressed(cells.size(), 0);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (suppressed[i]) continue;
    const CfarDetection& main = cells[i];
    peaks.push_back(to_peak(main, image.axes));

    for (std::size_t k = 1; k <= ratios.size(); ++k) {
      const double ratio = ratios[k - 1];
      if (ratio <= 0.0) continue;
      const double limit = cfg.power_margin * ratio * main.power;
      const long offset = std::lround(static_cast<double>(k) * spacing);
      for (const long sign : {1L, -1L}) {
        const long center = ((static_cast<long>(main.col) + sign * offset) % cols + cols) % cols;
        for (std::size_t j = i + 1; j < cells.size(); ++j) {
          if (suppressed[j]) continue;
          if (cells[j].power > limit) continue;
          if (circular_distance(static_cast<long>(cells[j].range_bin),
                                static_cast<long>(main.range_bin), rows) > 1) {
            continue;
          }
          if (circular_distance(static_cast<long>(cells[j].col), center, cols) <= 1) {
            suppressed[j] = 1;
          }
        }
      }
    }
  }
  return peaks;
}

std::vector<Peak> discard_static(const std::vector<Peak>& peaks, double speed_gate_mps) {
  std::vector<Peak> moving;
  for (const Peak& p : peaks) {
    if (std::abs(p.speed_mps) > speed_gate_mps) moving.push_back(p);
  }
  return moving;
}

std::vector<Peak> nlos_filter(const std::vector<Peak>& peaks, double nlos_boundary_range_m) {
  std::vector<Peak> kept;
  for (const Peak& p : peaks) {
    if (p.range_m > nlos_boundary_range_m) kept.push_back(p);
  }
  return kept;
}

void write_peaks_csv(const std::string& path, const std::vector<std::vector<Peak>>& frames,
                     double frame_interval_s) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << "# frames=" << frames.size() << " frame_interval_s=" << frame_interval_s << "\n";
  out << "frame_index,t_s,range_m,speed_mps,power_db\n";
  char line[160];
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const double t = static_cast<double>(i) * frame_interval_s;
    for (const Peak& p : frames[i]) {
      const double power_db = 10.0 * std::log10(p.power);
      std::snprintf(line, sizeof(line), "%zu,%.6f,%.9g,%.9g,%.9g\n", i, t, p.range_m, p.speed_mps,
                    power_db);
      out << line;
    }
  }
  if (!out) throw FormatError("write failure on '" + path + "'");
}

std::vector<std::vector<Peak>> read_peaks_csv(const std::string& path,
                                              double* frame_interval_s) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::vector<std::vector<Peak>> frames;
  std::string line;
  bool header_seen = false;
  std::size_t declared_frames = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("frames=");
      if (pos != std::string::npos) {
        declared_frames = static_cast<std::size_t>(std::stoull(line.substr(pos + 7)));
        if (declared_frames > frames.size()) frames.resize(declared_frames);
      }
      const auto interval_pos = line.find("frame_interval_s=");
      if (interval_pos != std::string::npos && frame_interval_s) {
        *frame_interval_s = std::stod(line.substr(interval_pos + 17));
      }
      continue;
    }
    if (!header_seen) {
      if (line.rfind("frame_index", 0) != 0) {
        throw FormatError("'" + path + "': missing peaks CSV header");
      }
      header_seen = true;
      continue;
    }
    std::istringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 5) throw FormatError("'" + path + "': malformed row '" + line + "'");
    const std::size_t frame = static_cast<std::size_t>(std::stoull(fields[0]));
    if (frame >= frames.size()) frames.resize(frame + 1);
    Peak p;
    p.range_m = std::stod(fields[2]);
    p.speed_mps = std::stod(fields[3]);
    p.power = std::pow(10.0, std::stod(fields[4]) / 10.0);
    frames[frame].push_back(p);
  }
  if (!header_seen) throw FormatError("'" + path + "': missing peaks CSV header");
  return frames;
}

}  // namespace nlosd
