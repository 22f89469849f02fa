#include "nlosd/cfar.hpp"

#include <algorithm>
#include <cmath>

#include "nlosd/errors.hpp"

namespace nlosd {

void CfarConfig::validate() const {
  if (training_cells < 1) throw ConfigError("cfar.training_cells must be >= 1");
  if (probability_of_false_alarm <= 0.0 || probability_of_false_alarm >= 1.0) {
    throw ConfigError("cfar.probability_of_false_alarm must be in (0, 1)");
  }
}

double cfar_threshold_factor(std::size_t training_cell_count, double probability_of_false_alarm) {
  const double n = static_cast<double>(training_cell_count);
  return n * (std::pow(probability_of_false_alarm, -1.0 / n) - 1.0);
}

namespace {

// Inclusive rectangle sums over the wrap-padded image via a summed-area
// table. Box differences on images with a huge dynamic range carry
// cancellation error, so callers must treat the result as a screen with an
// error bound and settle borderline cells exactly.
class WrappedSums {
 public:
  WrappedSums(const RadarImage& image, std::size_t pad)
      : pad_(pad),
        rows_(image.axes.padded_rows),
        cols_(image.axes.padded_cols),
        stride_(cols_ + 2 * pad + 1) {
    const std::size_t ext_rows = rows_ + 2 * pad;
    const std::size_t ext_cols = cols_ + 2 * pad;
    sat_.assign((ext_rows + 1) * stride_, 0.0);
    std::vector<double> extended(ext_cols);
    for (std::size_t r = 0; r < ext_rows; ++r) {
      const std::size_t src_r = (r + rows_ - pad % rows_) % rows_;
      const double* src = image.power.data() + src_r * cols_;
      // Wrap the row into a contiguous buffer once, then accumulate.
      for (std::size_t c = 0; c < pad; ++c) extended[c] = src[cols_ - pad + c];
      std::copy(src, src + cols_, extended.begin() + static_cast<std::ptrdiff_t>(pad));
      for (std::size_t c = 0; c < pad; ++c) extended[pad + cols_ + c] = src[c];

      double* row = sat_.data() + (r + 1) * stride_;
      const double* prev = sat_.data() + r * stride_;
      double running = 0.0;
      for (std::size_t c = 0; c < ext_cols; ++c) {
        running += extended[c];
        row[c + 1] = running + prev[c + 1];
      }
    }
  }

  // Sum of the (2h+1)^2 box centered at image cell (r, c).
  double box(std::size_t r, std::size_t c, std::size_t h) const {
    const std::size_t r0 = r + pad_ - h;
    const std::size_t c0 = c + pad_ - h;
    const std::size_t r1 = r + pad_ + h + 1;
    const std::size_t c1 = c + pad_ + h + 1;
    return sat_[r1 * stride_ + c1] - sat_[r0 * stride_ + c1] - sat_[r1 * stride_ + c0] +
           sat_[r0 * stride_ + c0];
  }

  // Scale of accumulated values, for cancellation slack.
  double total() const { return sat_.back(); }

 private:
  std::size_t pad_, rows_, cols_, stride_;
  std::vector<double> sat_;
};

std::size_t wrap(long v, std::size_t extent) {
  const long e = static_cast<long>(extent);
  return static_cast<std::size_t>(((v % e) + e) % e);
}

// Exact training-ring sum: outer box minus guard box, direct evaluation.
double exact_training_sum(const RadarImage& image, std::size_t r, std::size_t c,
                          std::size_t half, std::size_t guard) {
  const std::size_t rows = image.axes.padded_rows;
  const std::size_t cols = image.axes.padded_cols;
  const long h = static_cast<long>(half);
  const long g = static_cast<long>(guard);
  double sum = 0.0;
  for (long dr = -h; dr <= h; ++dr) {
    const std::size_t rr = wrap(static_cast<long>(r) + dr, rows);
    const double* row = image.power.data() + rr * cols;
    for (long dc = -h; dc <= h; ++dc) {
      if (dr >= -g && dr <= g && dc >= -g && dc <= g) continue;
      sum += row[wrap(static_cast<long>(c) + dc, cols)];
    }
  }
  return sum;
}

}  // namespace

std::vector<CfarDetection> cfar_detect(const RadarImage& image, const CfarConfig& cfar) {
  cfar.validate();
  const std::size_t rows = image.axes.padded_rows;
  const std::size_t cols = image.axes.padded_cols;
  const std::size_t half = cfar.half_extent();
  if (2 * half + 1 > rows || 2 * half + 1 > cols) {
    throw ConfigError("cfar window larger than radar image");
  }

  const double alpha =
      cfar_threshold_factor(cfar.training_cell_count(), cfar.probability_of_false_alarm);
  const double n_train = static_cast<double>(cfar.training_cell_count());

  WrappedSums sums(image, half);
  std::vector<CfarDetection> flagged;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double cell = image.at(r, c);
      if (cell <= 0.0) continue;
      const double screen = sums.box(r, c, half) - sums.box(r, c, cfar.guard_cells);
      // Slack absorbs cancellation error in the screen; candidates are
      // settled against the exactly summed training ring.
      const double slack = 1e-9 * std::abs(screen) + 1e-12 * cell + 1e-9 * sums.total();
      if (cell * n_train > alpha * screen - slack) {
        const double training = exact_training_sum(image, r, c, half, cfar.guard_cells);
        if (cell * n_train > alpha * training) {
          flagged.push_back({r, c, cell});
        }
      }
    }
  }

  // Keep only guard-neighborhood local maxima; ties break to the lower index.
  const long g = static_cast<long>(cfar.guard_cells);
  std::vector<CfarDetection> peaks;
  peaks.reserve(flagged.size());
  for (const CfarDetection& d : flagged) {
    bool is_max = true;
    for (long dr = -g; dr <= g && is_max; ++dr) {
      for (long dc = -g; dc <= g && is_max; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const std::size_t rr = wrap(static_cast<long>(d.range_bin) + dr, rows);
        const std::size_t cc = wrap(static_cast<long>(d.col) + dc, cols);
        const double other = image.at(rr, cc);
        if (other > d.power) {
          is_max = false;
        } else if (other == d.power && (rr < d.range_bin || (rr == d.range_bin && cc < d.col))) {
          is_max = false;
        }
      }
    }
    if (is_max) peaks.push_back(d);
  }

  std::sort(peaks.begin(), peaks.end(), [](const CfarDetection& a, const CfarDetection& b) {
    if (a.power != b.power) return a.power > b.power;
    if (a.range_bin != b.range_bin) return a.range_bin < b.range_bin;
    return a.col < b.col;
  });
  return peaks;
}

}  // namespace nlosd
