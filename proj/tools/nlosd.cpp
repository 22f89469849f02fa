// nlosd: NLOS intrusion-detection pipeline driver.
//
// Subcommands mirror the processing stages: simulate (scene -> CSIF dataset),
// detect (CSIF -> peak CSV), track (peaks -> track/estimate logs + per-frame
// decisions), roc (sweep a tracker's confirmation knob into an ROC table).
// Stage boundaries are files so every stage stays independently inspectable.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "nlosd/csif_io.hpp"
#include "nlosd/errors.hpp"
#include "nlosd/evaluation.hpp"
#include "nlosd/gm_phd.hpp"
#include "nlosd/kalman_tracker.hpp"
#include "nlosd/pipeline.hpp"
#include "nlosd/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nlosd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitFormat = 3;

struct Manifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // label -> path
  std::vector<std::string> outputs;
  json extra = json::object();
};

// Everything lands in --out as fixed file names plus a manifest describing
// the exact invocation; rerunning the manifest command reproduces the
// outputs bit-exactly for fixed seeds.
void write_manifest(const fs::path& out_dir, const Manifest& m) {
  json j;
  j["tool"] = "nlosd";
  j["tool_version"] = kVersion;
  j["command"] = m.command;
  json inputs = json::object();
  for (const auto& [label, path] : m.inputs) inputs[label] = path;
  j["inputs"] = inputs;
  j["outputs"] = m.outputs;
  for (const auto& [key, value] : m.extra.items()) j[key] = value;

  const fs::path path = out_dir / "manifest.json";
  const fs::path tmp = out_dir / "manifest.json.tmp";
  {
    std::ofstream out(tmp);
    out << j.dump(2) << "\n";
    if (!out) throw FormatError("cannot write manifest '" + path.string() + "'");
  }
  fs::rename(tmp, path);
}

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

// Atomic move of a finished temp file into place.
void finalize(const fs::path& tmp, const fs::path& final_path) { fs::rename(tmp, final_path); }

void progress_line(std::size_t done, std::size_t total) {
  if (total == 0) return;
  if (done == total || done % 100 == 0) {
    std::fprintf(stderr, "\r  frame %zu/%zu", done, total);
    if (done == total) std::fprintf(stderr, "\n");
    std::fflush(stderr);
  }
}

int cmd_simulate(const std::string& scene_path, const std::string& system_path,
                 const std::string& out, std::optional<std::uint64_t> seed) {
  const SystemConfig cfg = load_system_config(system_path);
  Scene scene = load_scene(scene_path);
  if (seed) scene.seed = *seed;
  validate_scene(scene, cfg);

  const fs::path dir = prepare_out_dir(out);
  const fs::path dataset = dir / "dataset.csif";
  const fs::path tmp = dir / "dataset.csif.tmp";
  const std::size_t count = dataset_frame_count(scene, cfg);
  {
    CsifWriter writer(tmp.string(), cfg, static_cast<std::uint32_t>(count));
    std::size_t done = 0;
    for_each_frame(scene, cfg, [&](const CsiFrame& frame) {
      writer.append(frame);
      progress_line(++done, count);
    });
    writer.finish();
  }
  finalize(tmp, dataset);

  Manifest m;
  m.command = "simulate";
  m.inputs = {{"scene", scene_path}, {"system", system_path}};
  m.outputs = {"dataset.csif"};
  m.extra["seed"] = scene.seed;
  m.extra["frame_count"] = count;
  write_manifest(dir, m);
  std::cout << dataset.string() << "\n";
  return kExitOk;
}

int cmd_detect(const std::string& dataset_path, const std::string& system_path,
               const std::string& detect_path, const std::string& out) {
  const SystemConfig cfg = load_system_config(system_path);
  DetectorConfig det = detect_path.empty() ? DetectorConfig{} : load_detector_config(detect_path);

  CsifReader reader(dataset_path);
  const auto peaks = sense_dataset(reader, cfg, det, progress_line);

  const fs::path dir = prepare_out_dir(out);
  const fs::path csv = dir / "peaks.csv";
  const fs::path tmp = dir / "peaks.csv.tmp";
  write_peaks_csv(tmp.string(), peaks, cfg.frame_duration_s);
  finalize(tmp, csv);

  Manifest m;
  m.command = "detect";
  m.inputs = {{"dataset", dataset_path}, {"system", system_path}};
  if (!detect_path.empty()) m.inputs.emplace_back("detect", detect_path);
  m.outputs = {"peaks.csv"};
  m.extra["frame_count"] = peaks.size();
  write_manifest(dir, m);
  std::cout << csv.string() << "\n";
  return kExitOk;
}

int cmd_track(const std::string& peaks_path, const std::string& tracker,
              const std::string& tracker_cfg_path, const std::string& out) {
  double frame_interval = 10e-3;
  const auto stream = read_peaks_csv(peaks_path, &frame_interval);

  const fs::path dir = prepare_out_dir(out);
  Manifest m;
  m.command = "track";
  m.inputs = {{"peaks", peaks_path}};
  if (!tracker_cfg_path.empty()) m.inputs.emplace_back("tracker_config", tracker_cfg_path);
  m.extra["tracker"] = tracker;

  const fs::path decisions = dir / "decisions.csv";
  const fs::path decisions_tmp = dir / "decisions.csv.tmp";
  std::ofstream dec(decisions_tmp);
  if (!dec) throw FormatError("cannot write '" + decisions.string() + "'");

  if (tracker == "kf") {
    KfConfig cfg = tracker_cfg_path.empty() ? KfConfig{} : load_kf_config(tracker_cfg_path);
    cfg.dt_s = frame_interval;
    KalmanTracker filter(cfg);
    std::vector<std::vector<Track>> log;
    dec << "frame_index,t_s,decision,confirmed_count\n";
    for (std::size_t i = 0; i < stream.size(); ++i) {
      const KfStepResult result = filter.step(stream[i]);
      log.push_back(filter.tracks());
      dec << i << ',' << static_cast<double>(i) * frame_interval << ','
          << (result.intruder_present ? 1 : 0) << ',' << result.confirmed.size() << "\n";
    }
    const fs::path tracks = dir / "tracks.csv";
    const fs::path tracks_tmp = dir / "tracks.csv.tmp";
    write_track_log_csv(tracks_tmp.string(), log);
    finalize(tracks_tmp, tracks);
    m.outputs = {"tracks.csv", "decisions.csv"};
  } else if (tracker == "phd") {
    PhdConfig cfg = tracker_cfg_path.empty() ? PhdConfig{} : load_phd_config(tracker_cfg_path);
    cfg.dt_s = frame_interval;
    GmPhdFilter filter(cfg);
    std::vector<PhdExtraction> log;
    dec << "frame_index,t_s,decision,cardinality\n";
    for (std::size_t i = 0; i < stream.size(); ++i) {
      const PhdStepResult result = filter.step(stream[i]);
      log.push_back(result.extraction);
      dec << i << ',' << static_cast<double>(i) * frame_interval << ','
          << (result.intruder_present ? 1 : 0) << ',' << result.extraction.cardinality << "\n";
    }
    const fs::path estimates = dir / "estimates.csv";
    const fs::path estimates_tmp = dir / "estimates.csv.tmp";
    write_phd_estimates_csv(estimates_tmp.string(), log);
    finalize(estimates_tmp, estimates);
    m.outputs = {"estimates.csv", "decisions.csv"};
  } else {
    throw CLI::ValidationError("--tracker", "unknown tracker kind '" + tracker + "'");
  }
  if (!dec) throw FormatError("write failure on '" + decisions.string() + "'");
  dec.close();
  finalize(decisions_tmp, decisions);
  write_manifest(dir, m);
  std::cout << decisions.string() << "\n";
  return kExitOk;
}

struct RocOptions {
  std::string tp_dataset;
  std::string tp_peaks;
  std::string fp_peaks;
  std::string system_path;
  std::string detect_path;
  std::string tracker = "phd";
  std::string tracker_cfg_path;
  std::string clutter_path;
  std::vector<double> grid;
  double window_ms = 300.0;
  double clutter_rate = -1.0;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_roc(const RocOptions& opt) {
  if (opt.tp_dataset.empty() == opt.tp_peaks.empty()) {
    throw CLI::ValidationError("--tp-dataset/--tp-peaks",
                               "exactly one true-positive input is required");
  }
  if (opt.tracker != "kf" && opt.tracker != "phd") {
    throw CLI::ValidationError("--tracker", "unknown tracker kind '" + opt.tracker + "'");
  }

  double frame_interval = 10e-3;
  std::vector<std::vector<Peak>> tp_stream;
  if (!opt.tp_peaks.empty()) {
    tp_stream = read_peaks_csv(opt.tp_peaks, &frame_interval);
  } else {
    if (opt.system_path.empty()) {
      throw CLI::ValidationError("--system", "required with --tp-dataset");
    }
    const SystemConfig cfg = load_system_config(opt.system_path);
    DetectorConfig det =
        opt.detect_path.empty() ? DetectorConfig{} : load_detector_config(opt.detect_path);
    CsifReader reader(opt.tp_dataset);
    tp_stream = sense_dataset(reader, cfg, det, progress_line);
    frame_interval = cfg.frame_duration_s;
  }

  WindowSpec spec;
  spec.window_s = opt.window_ms * 1e-3;
  spec.frame_interval_s = frame_interval;
  spec.validate();

  ClutterConfig clutter =
      opt.clutter_path.empty() ? ClutterConfig{} : load_clutter_config(opt.clutter_path);
  if (opt.clutter_rate >= 0.0) clutter.rate = opt.clutter_rate;
  if (opt.seed) clutter.seed = *opt.seed;

  // FP windows come from a clutter-only stream unless an explicit FP peak
  // stream (e.g. an empty-scene recording) is provided; clutter is injected
  // into both streams with independent substreams.
  std::vector<std::vector<Peak>> fp_base;
  std::string fp_source = "clutter-only";
  if (!opt.fp_peaks.empty()) {
    fp_base = read_peaks_csv(opt.fp_peaks);
    fp_source = opt.fp_peaks;
  } else {
    fp_base.assign(tp_stream.size(), {});
  }
  ClutterConfig tp_clutter = clutter;
  ClutterConfig fp_clutter = clutter;
  fp_clutter.seed = clutter.seed + 1;
  const auto tp_full = inject_clutter(tp_stream, tp_clutter);
  const auto fp_full = inject_clutter(fp_base, fp_clutter);

  const TrackerKind kind = opt.tracker == "kf" ? TrackerKind::Kf : TrackerKind::Phd;
  TrackerParams base;
  if (kind == TrackerKind::Kf) {
    KfConfig cfg =
        opt.tracker_cfg_path.empty() ? KfConfig{} : load_kf_config(opt.tracker_cfg_path);
    cfg.dt_s = frame_interval;
    base = cfg;
  } else {
    PhdConfig cfg =
        opt.tracker_cfg_path.empty() ? PhdConfig{} : load_phd_config(opt.tracker_cfg_path);
    cfg.dt_s = frame_interval;
    if (opt.clutter_path.empty() && opt.tracker_cfg_path.empty()) {
      cfg.clutter_intensity = clutter.clutter_intensity();
    }
    base = cfg;
  }

  const auto points = roc_sweep(tp_full, fp_full, kind, base, opt.grid, spec);

  const fs::path dir = prepare_out_dir(opt.out);
  const fs::path roc_csv = dir / "roc.csv";
  const fs::path roc_tmp = dir / "roc.csv.tmp";
  write_roc_csv(roc_tmp.string(), kind, opt.window_ms, points);
  finalize(roc_tmp, roc_csv);
  char curve_name[64];
  std::snprintf(curve_name, sizeof(curve_name), "curve_%s_tm%g.csv", opt.tracker.c_str(),
                opt.window_ms);
  const fs::path curve = dir / curve_name;
  const fs::path curve_tmp = dir / (std::string(curve_name) + ".tmp");
  write_curve_data(curve_tmp.string(), points);
  finalize(curve_tmp, curve);

  Manifest m;
  m.command = "roc";
  if (!opt.tp_dataset.empty()) m.inputs.emplace_back("tp_dataset", opt.tp_dataset);
  if (!opt.tp_peaks.empty()) m.inputs.emplace_back("tp_peaks", opt.tp_peaks);
  if (!opt.system_path.empty()) m.inputs.emplace_back("system", opt.system_path);
  if (!opt.detect_path.empty()) m.inputs.emplace_back("detect", opt.detect_path);
  if (!opt.tracker_cfg_path.empty()) m.inputs.emplace_back("tracker_config", opt.tracker_cfg_path);
  if (!opt.clutter_path.empty()) m.inputs.emplace_back("clutter", opt.clutter_path);
  m.outputs = {"roc.csv", curve_name};
  m.extra["tracker"] = opt.tracker;
  m.extra["window_ms"] = opt.window_ms;
  m.extra["clutter_rate"] = clutter.rate;
  m.extra["clutter_seed"] = clutter.seed;
  m.extra["fp_source"] = fp_source;
  json grid = json::array();
  for (double g : opt.grid) grid.push_back(g);
  m.extra["grid"] = grid;
  write_manifest(dir, m);
  std::cout << roc_csv.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NLOS intrusion detection pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string scene_path, system_path, detect_path, dataset_path, peaks_path;
  std::string tracker = "kf", tracker_cfg_path, out;
  std::uint64_t seed_value = 0;
  bool seed_given = false;

  auto* simulate = app.add_subcommand("simulate", "Synthesize a CSIF dataset from a scene");
  simulate->add_option("--scene", scene_path, "Scene JSON")->required();
  simulate->add_option("--system", system_path, "System config JSON")->required();
  simulate->add_option("--out", out, "Output directory")->required();
  simulate->add_option("--seed", seed_value, "Override the scene seed")
      ->each([&](const std::string&) { seed_given = true; });

  auto* detect = app.add_subcommand("detect", "Sense a CSIF dataset into a peak CSV");
  detect->add_option("--dataset", dataset_path, "CSIF dataset")->required();
  detect->add_option("--system", system_path, "System config JSON")->required();
  detect->add_option("--detect", detect_path, "Detector config JSON");
  detect->add_option("--out", out, "Output directory")->required();

  auto* track = app.add_subcommand("track", "Run a tracker over a peak CSV");
  track->add_option("--peaks", peaks_path, "Peak CSV")->required();
  track->add_option("--tracker", tracker, "Tracker kind: kf|phd")->required();
  track->add_option("--tracker-config", tracker_cfg_path, "Tracker config JSON");
  track->add_option("--out", out, "Output directory")->required();

  RocOptions roc;
  auto* roc_cmd = app.add_subcommand("roc", "Sweep a tracker knob into an ROC table");
  roc_cmd->add_option("--tp-dataset", roc.tp_dataset, "True-positive CSIF dataset");
  roc_cmd->add_option("--tp-peaks", roc.tp_peaks, "True-positive peak CSV");
  roc_cmd->add_option("--fp-peaks", roc.fp_peaks, "False-positive peak CSV (default: clutter only)");
  roc_cmd->add_option("--system", roc.system_path, "System config JSON");
  roc_cmd->add_option("--detect", roc.detect_path, "Detector config JSON");
  roc_cmd->add_option("--tracker", roc.tracker, "Tracker kind: kf|phd")->required();
  roc_cmd->add_option("--tracker-config", roc.tracker_cfg_path, "Tracker config JSON");
  roc_cmd->add_option("--clutter-config", roc.clutter_path, "Clutter config JSON");
  roc_cmd->add_option("--grid", roc.grid, "Parameter grid (w_B or range-variance threshold)")
      ->required()
      ->delimiter(',');
  roc_cmd->add_option("--window-ms", roc.window_ms, "Sub-measurement length in ms");
  roc_cmd->add_option("--clutter-rate", roc.clutter_rate, "Poisson clutter rate per frame");
  roc_cmd->add_option("--seed", seed_value, "Clutter seed")
      ->each([&](const std::string&) { seed_given = true; });
  roc_cmd->add_option("--out", roc.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
    if (simulate->parsed()) {
      return cmd_simulate(scene_path, system_path, out,
                          seed_given ? std::optional<std::uint64_t>(seed_value) : std::nullopt);
    }
    if (detect->parsed()) {
      return cmd_detect(dataset_path, system_path, detect_path, out);
    }
    if (track->parsed()) {
      return cmd_track(peaks_path, tracker, tracker_cfg_path, out);
    }
    if (roc_cmd->parsed()) {
      if (seed_given) roc.seed = seed_value;
      return cmd_roc(roc);
    }
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const FormatError& e) {
    std::cerr << "data format error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
