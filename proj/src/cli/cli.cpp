#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <numbers>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "approach/cli.hpp"
#include "approach/error.hpp"
#include "approach/eval.hpp"
#include "approach/io.hpp"
#include "approach/localization.hpp"
#include "approach/navigation.hpp"
#include "approach/simulator.hpp"

namespace approach::cli {
namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SimOptions {
  int steps = 20;
  double step_length = 0.3;
  double object_distance = 5.0;
  double object_bearing_deg = 0.0;
  double object_drop = 1.0;
  int background_points = 300;
  int width = 640;
  int height = 480;
  double focal = 500.0;
  std::string label = "object";
};

struct RunConfig {
  std::uint64_t seed = 0;
  LocalizationParams pipeline;
  NavConfig nav;
  std::string scale = "gt";
  std::string update_mode = "rigid";
  std::string camera = "P0";
  bool overlays = false;
  std::string out_dir = "out";
  std::optional<std::string> target_label;
  std::optional<int> target_frame;
  std::optional<int> first;
  std::optional<int> last;
  std::optional<std::string> poses;
  std::optional<std::string> objects;

  std::string image;
  std::string seq;
  std::string bboxes;
  std::string results;
  std::string sim_dir;
  SimOptions sim;
  int bench_frames = 11;
};

std::string fmt(double v, int decimals = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::optional<double> parse_fixed_scale(const std::string& s) {
  if (s.rfind("fixed:", 0) != 0) return std::nullopt;
  const char* first = s.data() + 6;
  const char* last = s.data() + s.size();
  double m = 0.0;
  const auto res = std::from_chars(first, last, m);
  if (res.ec != std::errc{} || res.ptr != last || !(m > 0.0) || !std::isfinite(m)) {
    return std::nullopt;
  }
  return m;
}

void add_pipeline_options(CLI::App* sub, RunConfig& c) {
  auto& f = c.pipeline.features;
  sub->add_option("--seed", c.seed, "RANSAC and simulator seed")->capture_default_str();
  sub->add_option("--levels", f.levels, "pyramid levels")
      ->check(CLI::Range(1, 16))
      ->capture_default_str();
  sub->add_option("--scale-factor", f.scale_factor, "pyramid scale step")
      ->check(CLI::Range(1.01, 4.0))
      ->capture_default_str();
  sub->add_option("--max-features", f.max_features, "feature budget across all levels")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  sub->add_option("--fast-threshold", f.fast_threshold, "FAST intensity threshold")
      ->check(CLI::Range(1, 254))
      ->capture_default_str();
  sub->add_option("--ransac-threshold", c.pipeline.ransac.threshold,
                  "RANSAC Sampson threshold in normalized image units (0.5 px at f = 500)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--ransac-iters", c.pipeline.ransac.max_iterations,
                  "RANSAC iteration cap (adaptive stop at 99% confidence)")
      ->check(CLI::Range(1, 10000000))
      ->capture_default_str();
  sub->add_option("--match-ratio", c.pipeline.matching.ratio,
                  "nearest/second-nearest Hamming ratio, mutual; max distance 64")
      ->check(CLI::Range(0.01, 1.0))
      ->capture_default_str();
}

void add_nav_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--angle-threshold", c.nav.angle_threshold_deg,
                  "alert when |path angle| exceeds this many degrees")
      ->check(CLI::Range(0.0, 180.0))
      ->capture_default_str();
  sub->add_option("--frame-interval", c.nav.frame_interval, "frames between processed pairs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--update-mode", c.update_mode,
                  "object update: rigid (o' = R o + t s) or paper (o' = o - d)")
      ->check(CLI::IsMember({"paper", "rigid"}))
      ->capture_default_str();
  sub->add_option("--arrival-radius", c.nav.arrival_radius_m,
                  "ground-plane distance in meters that counts as arrived")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

void add_scale_option(CLI::App* sub, RunConfig& c) {
  sub->add_option("--scale", c.scale,
                  "translation scale: gt (ground-truth baseline, unit with a warning when no "
                  "poses exist), fixed:<m>, or unit")
      ->check(CLI::Validator(
          [](std::string& s) -> std::string {
            if (s == "gt" || s == "unit" || parse_fixed_scale(s)) return {};
            return "expected gt, unit or fixed:<meters>, got '" + s + "'";
          },
          "SCALE"))
      ->capture_default_str();
}

void add_sequence_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--camera", c.camera, "calibration camera id")
      ->check(CLI::IsMember({"P0", "P1", "P2", "P3"}))
      ->capture_default_str();
  sub->add_option("--first", c.first, "first frame index to load");
  sub->add_option("--last", c.last, "last frame index to load");
  sub->add_option("--poses", c.poses,
                  "ground-truth pose file (default: <seq>/poses.txt or ../../poses/<seq>.txt)")
      ->check(CLI::ExistingFile);
}

void add_target_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--target-label", c.target_label, "pick the annotated box with this label");
  sub->add_option("--target-frame", c.target_frame,
                  "pick a box on this frame (default: the first box in the file)");
}

io::SequenceManifest load_manifest(const RunConfig& c) {
  io::SequenceOptions opts;
  opts.camera = c.camera;
  opts.first = c.first;
  opts.last = c.last;
  if (c.poses) opts.poses_path = fs::path(*c.poses);
  if (c.objects) opts.objects_path = fs::path(*c.objects);
  return io::load_sequence(c.seq, opts);
}

BoundingBox select_box(const std::vector<BoundingBox>& boxes, const RunConfig& c) {
  for (const auto& b : boxes) {
    if (c.target_frame && b.frame != *c.target_frame) continue;
    if (c.target_label && b.label != *c.target_label) continue;
    return b;
  }
  std::string what = "no bounding box";
  if (c.target_label) what += " labeled '" + *c.target_label + "'";
  if (c.target_frame) what += " on frame " + std::to_string(*c.target_frame);
  throw UsageError(what + " in " + c.bboxes);
}

void apply_config(RunConfig& c, std::ostream& err, bool have_poses) {
  c.pipeline.ransac.seed = c.seed;
  c.nav.update_mode = c.update_mode == "paper" ? UpdateMode::kTranslationOnly : UpdateMode::kRigid;
  if (c.scale == "gt") {
    c.nav.scale = ScaleSource::Kind::kGroundTruth;
    if (!have_poses) {
      err << "warning: no ground-truth poses; --scale gt falls back to unit scale\n";
      c.nav.scale = ScaleSource::Kind::kUnit;
    }
  } else if (c.scale == "unit") {
    c.nav.scale = ScaleSource::Kind::kUnit;
  } else {
    c.nav.scale = ScaleSource::Kind::kFixed;
    c.nav.fixed_step_m = *parse_fixed_scale(c.scale);
  }
  c.nav.pipeline = c.pipeline;
  try {
    c.nav.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

BaselineFn make_baseline(const io::SequenceManifest& m) {
  if (!m.poses) return {};
  return [&m](int a, int b) {
    const auto pa = m.position_of(a);
    const auto pb = m.position_of(b);
    if (!pa || !pb) {
      throw Error(ErrorCode::kInvalidArgument, "no ground-truth pose for frame pair " +
                                                   std::to_string(a) + "-" + std::to_string(b));
    }
    return ((*m.poses)[*pb].t - (*m.poses)[*pa].t).norm();
  };
}

ScaleSource scale_source(const RunConfig& c, const BaselineFn& baseline, int a, int b) {
  switch (c.nav.scale) {
    case ScaleSource::Kind::kGroundTruth: return ScaleSource::ground_truth(baseline(a, b));
    case ScaleSource::Kind::kFixed: return ScaleSource::fixed(c.nav.fixed_step_m);
    case ScaleSource::Kind::kUnit: break;
  }
  return ScaleSource::unit();
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + dir.string());
}

// --- subcommands -------------------------------------------------------------

int cmd_features(RunConfig& c, std::ostream& out, std::ostream& err) {
  apply_config(c, err, true);
  const GrayImage img = io::read_image(c.image);
  const FeatureSet fs = detect_and_describe(img, c.pipeline.features);
  make_dir(c.out_dir);
  std::string csv = "u,v,level,orientation,response\n";
  io::RgbImage overlay(img);
  for (const auto& kp : fs.keypoints) {
    csv += io::format_fixed(kp.position.u) + "," + io::format_fixed(kp.position.v) + "," +
           std::to_string(kp.level) + "," + io::format_fixed(kp.orientation) + "," +
           io::format_fixed(kp.response) + "\n";
    const int x = static_cast<int>(std::lround(kp.position.u));
    const int y = static_cast<int>(std::lround(kp.position.v));
    for (int d = -2; d <= 2; ++d) {
      overlay.set(x + d, y, 0, 255, 0);
      overlay.set(x, y + d, 0, 255, 0);
    }
  }
  io::write_text(fs::path(c.out_dir) / "keypoints.csv", csv);
  io::write_ppm(fs::path(c.out_dir) / "features.ppm", overlay);
  out << fs.size() << " keypoints written to " << (fs::path(c.out_dir) / "keypoints.csv").string()
      << "\n";
  return kExitOk;
}

struct Target {
  io::SequenceManifest manifest;
  BoundingBox box;
  int position = 0;
};

Target load_target(RunConfig& c, std::ostream& err) {
  Target t;
  t.manifest = load_manifest(c);
  const auto boxes = io::read_bboxes(c.bboxes);
  t.box = select_box(boxes, c);
  const auto pos = t.manifest.position_of(t.box.frame);
  if (!pos) {
    throw UsageError("bounding box refers to frame " + std::to_string(t.box.frame) +
                     ", which is not in the loaded sequence");
  }
  t.position = *pos;
  apply_config(c, err, t.manifest.poses.has_value());
  return t;
}

int cmd_localize(RunConfig& c, std::ostream& out, std::ostream& err) {
  Target t = load_target(c, err);
  if (t.position + 1 >= static_cast<int>(t.manifest.image_paths.size())) {
    throw UsageError("frame " + std::to_string(t.box.frame) + " has no successor");
  }
  const GrayImage f0 = io::read_image(t.manifest.image_paths[t.position]);
  const GrayImage f1 = io::read_image(t.manifest.image_paths[t.position + 1]);
  const int a = t.manifest.frame_indices[t.position];
  const int b = t.manifest.frame_indices[t.position + 1];
  const auto res = localize_object(f0, f1, t.box, t.manifest.K,
                                   scale_source(c, make_baseline(t.manifest), a, b),
                                   c.pipeline);
  const Vec3& o = res.location.position;
  out << "object " << t.box.label << " frame " << a << ": " << io::format_fixed(o.x()) << " "
      << io::format_fixed(o.y()) << " " << io::format_fixed(o.z()) << " ("
      << to_string(res.location.provenance) << ", " << res.pose_inliers.size()
      << " pose inliers, " << res.object_pairs.size() << " object pairs)\n";
  for (const auto& gt : t.manifest.objects) {
    if (gt.frame == a) {
      out << "ground-plane error: "
          << io::format_fixed(eval::localization_error(res.location, gt.position)) << " m\n";
    }
  }
  return kExitOk;
}

int cmd_navigate(RunConfig& c, std::ostream& out, std::ostream& err) {
  Target t = load_target(c, err);
  const auto& m = t.manifest;
  std::vector<GrayImage> frames;
  for (std::size_t i = t.position; i < m.image_paths.size(); ++i) {
    frames.push_back(io::read_image(m.image_paths[i]));
  }
  if (frames.size() < 3) {
    throw UsageError("navigation needs at least 3 frames from frame " +
                     std::to_string(t.box.frame));
  }
  NavLog log = run_navigation(frames, t.box, m.K, c.nav, make_baseline(m), t.box.frame);
  if (m.poses) {
    const auto& start = (*m.poses)[t.position];
    for (auto& rec : log.records) {
      if (auto p = m.position_of(rec.frame)) rec.gt_position = io::center_in(start, (*m.poses)[*p]);
    }
  }
  for (const auto& rec : log.records) {
    out << "frame " << rec.frame << ": ";
    if (rec.skipped) {
      out << "skipped (" << rec.error << ")\n";
    } else {
      out << rec.advice.message << "\n";
    }
  }
  io::OverlayOptions ov;
  ov.enabled = c.overlays;
  ov.frames = &frames;
  ov.first_frame = t.box.frame;
  ov.K = m.K;
  const auto summary = io::write_outputs(log, c.out_dir, ov);
  io::write_text(fs::path(c.out_dir) / "run_info.txt",
                 std::string("scale: ") +
                     (c.nav.scale == ScaleSource::Kind::kGroundTruth ? "gt"
                      : c.nav.scale == ScaleSource::Kind::kFixed    ? "fixed"
                                                                     : "unit") +
                     "\nupdate_mode: " + to_string(c.nav.update_mode) + "\nseed: " +
                     std::to_string(c.seed) + "\n");
  out << (log.arrived ? "arrived" : "not arrived") << " after " << log.records.size()
      << " steps (" << log.skipped_count() << " skipped); outputs in "
      << summary.trajectory_csv.parent_path().string() << "\n";
  return kExitOk;
}

int cmd_simulate(RunConfig& c, std::ostream& out) {
  const auto& s = c.sim;
  constexpr double kDeg = std::numbers::pi / 180.0;
  sim::SceneConfig sc;
  sc.seed = c.seed;
  sc.background_points = s.background_points;
  sc.object_center = Vec3(s.object_distance * std::sin(s.object_bearing_deg * kDeg), s.object_drop,
                          s.object_distance * std::cos(s.object_bearing_deg * kDeg));
  const sim::Scene scene = sim::make_scene(sc);
  sim::SimCamera cam;
  cam.width = s.width;
  cam.height = s.height;
  cam.K = CameraIntrinsics(s.focal, s.focal, 0.5 * s.width, 0.5 * s.height);
  const auto script = sim::straight_walk(Vec3::Zero(), 0.0, s.step_length, s.steps);
  sim::write_sequence(c.sim_dir, scene, script, cam, s.label);
  out << "wrote " << script.poses.size() << " frames to " << c.sim_dir << "\n";
  return kExitOk;
}

int cmd_evaluate(RunConfig& c, std::ostream& out, std::ostream& err) {
  const io::SequenceManifest m = load_manifest(c);
  const fs::path dir(c.results);
  const auto rows = io::parse_trajectory_csv(io::read_text(dir / "trajectory.csv"));
  const auto advice = io::parse_advice_csv(io::read_text(dir / "advice.csv"));
  const auto objects = io::parse_object_csv(io::read_text(dir / "object.csv"));
  if (objects.empty()) throw UsageError("no records in " + (dir / "object.csv").string());
  std::error_code ec;
  if (fs::exists(dir / "run_info.txt", ec) &&
      io::read_text(dir / "run_info.txt").find("scale: gt") == std::string::npos) {
    err << "warning: results were not produced with --scale gt; metric errors are not "
           "comparable\n";
  }
  const int start = objects.front().frame;
  const auto start_pos = m.position_of(start);

  std::vector<Vec3> est, gt;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i < advice.size() && advice[i].advice == "skipped") continue;
    Vec3 g;
    if (rows[i].ground_truth) {
      g = *rows[i].ground_truth;
    } else {
      const auto p = m.position_of(rows[i].frame);
      if (!m.poses || !start_pos || !p) {
        throw UsageError("no ground truth for frame " + std::to_string(rows[i].frame));
      }
      g = io::center_in((*m.poses)[*start_pos], (*m.poses)[*p]);
    }
    est.push_back(rows[i].estimate);
    gt.push_back(g);
    labels.push_back(std::to_string(rows[i].frame));
  }
  eval::VideoResult video;
  video.name = fs::path(c.seq).filename().string();
  if (video.name.empty()) video.name = fs::path(c.seq).parent_path().filename().string();
  video.trajectory = eval::trajectory_errors(eval::steps_from_positions(est),
                                             eval::steps_from_positions(gt), labels);
  for (const auto& o : m.objects) {
    if (o.frame == start) {
      ObjectLocation loc;
      loc.position = objects.front().position;
      video.localization = eval::summarize({eval::localization_error(loc, o.position)},
                                           {std::to_string(start)});
    }
  }
  const std::string traj = eval::format_trajectory_table({video});
  const std::string loc = eval::format_localization_table({video});
  out << traj << loc;
  if (!video.localization) err << "warning: no ground-truth object for frame " << start << "\n";
  return kExitOk;
}

template <typename F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_bench(RunConfig& c, std::ostream& out, std::ostream& err) {
  io::SequenceManifest m = load_manifest(c);
  apply_config(c, err, m.poses.has_value());
  const std::size_t n = std::min<std::size_t>(m.image_paths.size(), c.bench_frames);
  std::vector<GrayImage> frames;
  for (std::size_t i = 0; i < n; ++i) frames.push_back(io::read_image(m.image_paths[i]));
  const auto& fc = c.pipeline.features;
  const BaselineFn baseline = make_baseline(m);

  std::vector<FeatureSet> feats(n);
  std::vector<double> t_detect, t_step, t_init;
  for (std::size_t i = 0; i < n; ++i) {
    t_detect.push_back(seconds([&] { feats[i] = detect_and_describe(frames[i], fc); }));
  }
  int failures = 0;
  for (std::size_t i = 1; i < n; ++i) {
    t_step.push_back(seconds([&] {
      try {
        const auto mr = match_features(feats[i - 1], feats[i], c.pipeline.matching);
        estimate_relative_pose(mr.correspondences, m.K, c.pipeline.ransac);
      } catch (const Error&) {
        ++failures;
      }
    }));
  }
  // Without annotations the target is the lower-middle of the first frame,
  // away from the forward-motion epipole.
  const double w = frames[0].width, h = frames[0].height;
  BoundingBox box =
      BoundingBox::make(m.frame_indices[0], "bench", w / 4, h / 2, 3 * w / 4, h - 1);
  std::error_code ec;
  if (fs::exists(fs::path(c.seq) / "bboxes.txt", ec)) {
    for (const auto& b : io::read_bboxes(fs::path(c.seq) / "bboxes.txt")) {
      if (b.frame == m.frame_indices[0]) box = b;
    }
  }
  const FeatureSet masked = detect_and_describe(frames[0], fc, box.rect);
  int init_failures = 0;
  std::string init_error;
  t_init.push_back(seconds([&] {
    try {
      const auto full = match_features(feats[0], feats[1], c.pipeline.matching);
      const auto obj = match_features(masked, feats[1], c.pipeline.matching);
      localize_from_matches(full.correspondences, obj.correspondences, box, m.K,
                            scale_source(c, baseline, m.frame_indices[0], m.frame_indices[1]),
                            c.pipeline);
    } catch (const Error& e) {
      ++init_failures;
      init_error = e.what();
    }
  }));

  auto row = [&](const char* name, const std::vector<double>& t) {
    double sum = 0.0, mx = 0.0;
    for (double x : t) {
      sum += x;
      mx = std::max(mx, x);
    }
    out << name << "," << fmt(t.empty() ? 0.0 : sum / t.size(), 6) << "," << fmt(mx, 6) << ","
        << t.size() << "\n";
  };
  out << "# " << frames[0].width << "x" << frames[0].height << ", " << n << " frames\n";
  out << "stage,mean_s,max_s,count\n";
  row("detection", t_detect);
  row("trajectory_step", t_step);
  row("initialization", t_init);
  if (failures || init_failures) {
    err << "warning: " << failures << " step and " << init_failures
        << " initialization failures during timing";
    if (!init_error.empty()) err << " (" << init_error << ")";
    err << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Monocular visual guidance toward a detected object"};
  app.require_subcommand(1);
  app.footer(
      "Conventions: X_cur = R X_ref + t s, Y down, positive path angles mean the target is to "
      "the right. CSV numbers use fixed notation with 9 decimals. Exit codes: 0 success, 1 "
      "pipeline error, 2 usage error.");

  auto* features = app.add_subcommand("features", "detect keypoints; write keypoints.csv and "
                                                  "features.ppm");
  features->add_option("image", c.image, "PGM or PNG image")->required()->check(CLI::ExistingFile);
  add_pipeline_options(features, c);
  features->add_option("--out", c.out_dir, "output directory")->capture_default_str();

  auto* localize = app.add_subcommand("localize", "initial object position from two frames");
  localize->add_option("seq", c.seq, "sequence directory")->required()->check(CLI::ExistingDirectory);
  localize->add_option("bboxes", c.bboxes, "bounding-box file")->required()->check(CLI::ExistingFile);
  add_pipeline_options(localize, c);
  add_scale_option(localize, c);
  add_sequence_options(localize, c);
  add_target_options(localize, c);
  localize->add_option("--objects", c.objects, "ground-truth object positions")
      ->check(CLI::ExistingFile);

  auto* navigate = app.add_subcommand("navigate", "full guidance run with advice stream");
  navigate->add_option("seq", c.seq, "sequence directory")->required()->check(CLI::ExistingDirectory);
  navigate->add_option("bboxes", c.bboxes, "bounding-box file")->required()->check(CLI::ExistingFile);
  add_pipeline_options(navigate, c);
  add_nav_options(navigate, c);
  add_scale_option(navigate, c);
  add_sequence_options(navigate, c);
  add_target_options(navigate, c);
  navigate->add_flag("--overlays", c.overlays, "write overlay_NNNNNN.ppm per step");
  navigate->add_option("--out", c.out_dir, "output directory")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "write a synthetic sequence");
  simulate->add_option("out-dir", c.sim_dir, "destination directory")->required();
  simulate->add_option("--seed", c.seed, "scene seed")->capture_default_str();
  simulate->add_option("--steps", c.sim.steps, "walking steps (frames - 1)")
      ->check(CLI::Range(2, 100000))
      ->capture_default_str();
  simulate->add_option("--step-length", c.sim.step_length, "meters per step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--object-distance", c.sim.object_distance, "meters to the target")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--object-bearing", c.sim.object_bearing_deg,
                       "target bearing in degrees, positive to the right")
      ->check(CLI::Range(-80.0, 80.0))
      ->capture_default_str();
  simulate->add_option("--object-drop", c.sim.object_drop,
                       "target height below the camera in meters (Y down); 0 puts a dead-ahead "
                       "target on the epipole, where two-view triangulation is degenerate")
      ->capture_default_str();
  simulate->add_option("--background-points", c.sim.background_points, "scene points")
      ->check(CLI::Range(0, 1000000))
      ->capture_default_str();
  simulate->add_option("--width", c.sim.width, "image width")
      ->check(CLI::Range(64, 8192))
      ->capture_default_str();
  simulate->add_option("--height", c.sim.height, "image height")
      ->check(CLI::Range(64, 8192))
      ->capture_default_str();
  simulate->add_option("--focal", c.sim.focal, "focal length in pixels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--label", c.sim.label, "target label")->capture_default_str();

  auto* evaluate = app.add_subcommand("evaluate", "trajectory and localization error tables");
  evaluate->add_option("seq", c.seq, "sequence directory")->required()->check(CLI::ExistingDirectory);
  evaluate->add_option("results", c.results, "navigate output directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  add_sequence_options(evaluate, c);
  evaluate->add_option("--objects", c.objects, "ground-truth object positions")
      ->check(CLI::ExistingFile);

  auto* bench = app.add_subcommand("bench", "per-stage timings");
  bench->add_option("seq", c.seq, "sequence directory")->required()->check(CLI::ExistingDirectory);
  add_pipeline_options(bench, c);
  add_scale_option(bench, c);
  add_sequence_options(bench, c);
  bench->add_option("--frames", c.bench_frames, "frames to time")
      ->check(CLI::Range(2, 100000))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (features->parsed()) return cmd_features(c, out, err);
    if (localize->parsed()) return cmd_localize(c, out, err);
    if (navigate->parsed()) return cmd_navigate(c, out, err);
    if (simulate->parsed()) return cmd_simulate(c, out);
    if (evaluate->parsed()) return cmd_evaluate(c, out, err);
    if (bench->parsed()) return cmd_bench(c, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitPipeline;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPipeline;
  }
  return kExitUsage;
}

}  // namespace approach::cli
