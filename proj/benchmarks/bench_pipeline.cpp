#include <benchmark/benchmark.h>

#include "nlosd/pipeline.hpp"

using namespace nlosd;

namespace {

SystemConfig bench_config(std::size_t n, std::size_t m) {
  SystemConfig cfg;
  cfg.subcarrier_count = n;
  cfg.symbol_count_per_frame = m;
  cfg.dl_symbols_per_pattern = 104;
  cfg.ul_symbols_per_pattern = 36;
  cfg.frame_duration_s = static_cast<double>(m) * cfg.symbol_duration_s * 1.05;
  cfg.tdd_pattern_duration_s = 1.25e-3;
  return cfg;
}

Scene bench_scene() {
  Scene scene;
  Scatterer wall;
  wall.kind = ScattererKind::Static;
  wall.initial_range_m = 23.0;
  wall.amplitude = 8.0;
  Scatterer target;
  target.kind = ScattererKind::Moving;
  target.initial_range_m = 29.3;
  target.radial_speed_mps = 1.67;
  target.nlos = true;
  scene.scatterers = {wall, target};
  scene.noise_power = 2000.0;
  scene.nlos_boundary_range_m = 24.0;
  scene.duration_s = 10.0;
  scene.seed = 3;
  return scene;
}

}  // namespace

static void BM_SynthesizeCsi(benchmark::State& state) {
  const SystemConfig cfg = bench_config(1584, 1120);
  const Scene scene = bench_scene();
  std::size_t frame = 0;
  for (auto _ : state) {
    Rng rng = frame_noise_rng(scene, frame % 100);
    CsiFrame f = synthesize_csi(scene, cfg, frame % 100, rng);
    benchmark::DoNotOptimize(f.h.data());
    ++frame;
  }
}
BENCHMARK(BM_SynthesizeCsi)->Unit(benchmark::kMillisecond);

static void BM_Periodogram(benchmark::State& state) {
  const SystemConfig cfg = bench_config(1584, 1120);
  const AxisMap axes = axis_map(cfg);
  const Scene scene = bench_scene();
  Rng rng = frame_noise_rng(scene, 0);
  const CsiFrame frame = synthesize_csi(scene, cfg, 0, rng);
  PeriodogramEngine engine(axes);
  for (auto _ : state) {
    RadarImage image = engine.compute(frame);
    benchmark::DoNotOptimize(image.power.data());
  }
}
BENCHMARK(BM_Periodogram)->Unit(benchmark::kMillisecond);

static void BM_CfarDetect(benchmark::State& state) {
  const SystemConfig cfg = bench_config(1584, 1120);
  const AxisMap axes = axis_map(cfg);
  const Scene scene = bench_scene();
  Rng rng = frame_noise_rng(scene, 0);
  const CsiFrame frame = synthesize_csi(scene, cfg, 0, rng);
  PeriodogramEngine engine(axes);
  const RadarImage image = engine.compute(frame);
  CfarConfig cfar;
  cfar.training_cells = 4;
  cfar.guard_cells = 2;
  cfar.probability_of_false_alarm = 1e-8;
  for (auto _ : state) {
    auto cells = cfar_detect(image, cfar);
    benchmark::DoNotOptimize(cells.data());
  }
}
BENCHMARK(BM_CfarDetect)->Unit(benchmark::kMillisecond);

static void BM_FullFrame(benchmark::State& state) {
  const SystemConfig cfg = bench_config(1584, 1120);
  const AxisMap axes = axis_map(cfg);
  const Scene scene = bench_scene();
  DetectorConfig det;
  det.cfar.training_cells = 4;
  det.cfar.guard_cells = 2;
  det.cfar.probability_of_false_alarm = 1e-8;
  det.nlos_boundary_range_m = 24.0;
  const double gate = det.effective_speed_gate(cfg);
  PeriodogramEngine engine(axes);
  std::size_t frame = 0;
  for (auto _ : state) {
    Rng rng = frame_noise_rng(scene, frame % 100);
    const CsiFrame f = synthesize_csi(scene, cfg, frame % 100, rng);
    const RadarImage image = engine.compute(f);
    auto peaks = detect_frame(image, f.mask, det, gate);
    benchmark::DoNotOptimize(peaks.data());
    ++frame;
  }
}
BENCHMARK(BM_FullFrame)->Unit(benchmark::kMillisecond);

static void BM_KalmanStep(benchmark::State& state) {
  KfConfig cfg;
  KalmanTracker tracker(cfg);
  Peak target;
  target.range_m = 29.3;
  target.speed_mps = 1.67;
  ClutterConfig clutter;
  std::size_t frame = 0;
  for (auto _ : state) {
    std::vector<Peak> peaks = sample_clutter(clutter, frame % 1000);
    peaks.push_back(target);
    benchmark::DoNotOptimize(tracker.step(peaks).active_tracks);
    ++frame;
  }
}
BENCHMARK(BM_KalmanStep);

static void BM_PhdStep(benchmark::State& state) {
  PhdConfig cfg;
  cfg.clutter_intensity = 9.652e-4;
  GmPhdFilter filter(cfg);
  Peak target;
  target.range_m = 29.3;
  target.speed_mps = 1.67;
  ClutterConfig clutter;
  std::size_t frame = 0;
  for (auto _ : state) {
    std::vector<Peak> peaks = sample_clutter(clutter, frame % 1000);
    peaks.push_back(target);
    benchmark::DoNotOptimize(filter.step(peaks).total_weight);
    ++frame;
  }
}
BENCHMARK(BM_PhdStep);

BENCHMARK_MAIN();
