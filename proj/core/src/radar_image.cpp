#include "nlosd/radar_image.hpp"

#include <fftw3.h>

#include <mutex>

#include "nlosd/errors.hpp"

namespace nlosd {

namespace {
// FFTW planner is not thread-safe; execution on distinct buffers is.
std::mutex g_planner_mutex;
}  // namespace

struct PeriodogramEngine::Impl {
  AxisMap axes;
  fftw_complex* buf = nullptr;
  fftw_plan rows_forward = nullptr;   // symbol axis, length M', over occupied rows
  fftw_plan cols_backward = nullptr;  // subcarrier axis, length N', every Doppler column
  std::size_t planned_rows = 0;

  explicit Impl(const AxisMap& axes_in) : axes(axes_in) {
    const int n_rows = static_cast<int>(axes.padded_rows);
    const int n_cols = static_cast<int>(axes.padded_cols);
    buf = fftw_alloc_complex(axes.padded_rows * axes.padded_cols);
    if (!buf) throw std::bad_alloc();

    std::lock_guard<std::mutex> lock(g_planner_mutex);
    // In-place, FFTW_ESTIMATE: deterministic plan choice, no measurement runs.
    cols_backward = fftw_plan_many_dft(1, &n_rows, n_cols, buf, nullptr, n_cols, 1, buf, nullptr,
                                       n_cols, 1, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!cols_backward) throw std::runtime_error("fftw plan creation failed");
    plan_rows(axes.padded_rows);
  }

  // Zero-padded rows transform to zero; planning only the occupied rows
  // saves the padding share of the first stage.
  void plan_rows(std::size_t rows) {
    const int n_cols = static_cast<int>(axes.padded_cols);
    if (rows_forward) fftw_destroy_plan(rows_forward);
    rows_forward =
        fftw_plan_many_dft(1, &n_cols, static_cast<int>(rows), buf, nullptr, 1, n_cols, buf,
                           nullptr, 1, n_cols, FFTW_FORWARD, FFTW_ESTIMATE);
    if (!rows_forward) throw std::runtime_error("fftw plan creation failed");
    planned_rows = rows;
  }

  ~Impl() {
    std::lock_guard<std::mutex> lock(g_planner_mutex);
    if (rows_forward) fftw_destroy_plan(rows_forward);
    if (cols_backward) fftw_destroy_plan(cols_backward);
    if (buf) fftw_free(buf);
  }
};

PeriodogramEngine::PeriodogramEngine(const AxisMap& axes) : impl_(std::make_unique<Impl>(axes)) {}

PeriodogramEngine::~PeriodogramEngine() = default;

RadarImage PeriodogramEngine::compute(const CsiFrame& frame) {
  const AxisMap& axes = impl_->axes;
  const std::size_t n_rows = axes.padded_rows;
  const std::size_t n_cols = axes.padded_cols;
  if (frame.rows > n_rows || frame.cols > n_cols) {
    throw FormatError("compute_periodogram: frame larger than padded grid");
  }
  if (frame.mask.size() != frame.cols || frame.h.size() != frame.rows * frame.cols) {
    throw FormatError("compute_periodogram: inconsistent frame dimensions");
  }

  fftw_complex* buf = impl_->buf;
  std::fill(reinterpret_cast<double*>(buf), reinterpret_cast<double*>(buf) + 2 * n_rows * n_cols,
            0.0);
  for (std::size_t n = 0; n < frame.rows; ++n) {
    const std::complex<float>* src = frame.h.data() + n * frame.cols;
    fftw_complex* dst = buf + n * n_cols;
    for (std::size_t m = 0; m < frame.cols; ++m) {
      dst[m][0] = static_cast<double>(src[m].real());
      dst[m][1] = static_cast<double>(src[m].imag());
    }
  }

  if (impl_->planned_rows != frame.rows) {
    std::lock_guard<std::mutex> lock(g_planner_mutex);
    impl_->plan_rows(frame.rows);
  }
  fftw_execute(impl_->rows_forward);
  fftw_execute(impl_->cols_backward);

  RadarImage image;
  image.axes = axes;
  image.frame_index = frame.frame_index;
  image.power.resize(n_rows * n_cols);
  const double scale = 1.0 / (static_cast<double>(n_rows) * static_cast<double>(n_cols));
  const std::size_t half = n_cols / 2;
  for (std::size_t k = 0; k < n_rows; ++k) {
    const fftw_complex* src = buf + k * n_cols;
    double* dst = image.power.data() + k * n_cols;
    // FFT shift: unshifted Doppler index l lands in column (l + M'/2) mod M'.
    for (std::size_t l = 0; l < half; ++l) {
      dst[l + half] = (src[l][0] * src[l][0] + src[l][1] * src[l][1]) * scale;
    }
    for (std::size_t l = half; l < n_cols; ++l) {
      dst[l - half] = (src[l][0] * src[l][0] + src[l][1] * src[l][1]) * scale;
    }
  }
  return image;
}

RadarImage compute_periodogram(const CsiFrame& frame, const AxisMap& axes) {
  PeriodogramEngine engine(axes);
  return engine.compute(frame);
}

}  // namespace nlosd
