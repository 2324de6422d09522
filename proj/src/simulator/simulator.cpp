#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <random>

#include "approach/error.hpp"
#include "approach/io.hpp"
#include "approach/simulator.hpp"

namespace approach::sim {
namespace {

constexpr double kMinDepth = 0.1;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

bool in_bounds(const SimCamera& cam, const ImagePoint& p) {
  if (cam.width <= 0 || cam.height <= 0) return true;
  return p.u >= 0.0 && p.v >= 0.0 && p.u < cam.width && p.v < cam.height;
}

std::optional<ImagePoint> visible(const SimCamera& cam, const Vec3& Xc) {
  if (!(Xc.z() > kMinDepth)) return std::nullopt;
  const ImagePoint p = cam.K.project(Xc);
  if (!in_bounds(cam, p)) return std::nullopt;
  return p;
}

}  // namespace

CameraPose CameraPose::from_center_yaw(const Vec3& center, double yaw) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  Mat3 R_wc;
  R_wc << c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c;
  CameraPose pose;
  pose.R = R_wc.transpose();
  pose.t = -pose.R * center;
  return pose;
}

CameraPose CameraPose::look_at(const Vec3& center, const Vec3& target) {
  const Vec3 z = (target - center).normalized();
  Vec3 x = Vec3::UnitY().cross(z);
  if (x.norm() < 1e-9) x = Vec3::UnitX();
  x.normalize();
  const Vec3 y = z.cross(x);
  Mat3 R_wc;
  R_wc.col(0) = x;
  R_wc.col(1) = y;
  R_wc.col(2) = z;
  CameraPose pose;
  pose.R = R_wc.transpose();
  pose.t = -pose.R * center;
  return pose;
}

RelativePose relative_pose(const CameraPose& a, const CameraPose& b) {
  const Mat3 R = b.R * a.R.transpose();
  const Vec3 t = b.t - R * a.t;
  return RelativePose::make(R, t, t.norm(), ScaleProvenance::kGroundTruthBaseline);
}

Scene make_scene(const SceneConfig& cfg) {
  Scene scene;
  scene.seed = cfg.seed;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> ux(cfg.box_min.x(), cfg.box_max.x());
  std::uniform_real_distribution<double> uy(cfg.box_min.y(), cfg.box_max.y());
  std::uniform_real_distribution<double> uz(cfg.box_min.z(), cfg.box_max.z());
  for (int i = 0; i < cfg.background_points; ++i) {
    const double x = ux(rng), y = uy(rng), z = uz(rng);
    scene.points.emplace_back(x, y, z);
  }
  if (cfg.object_center) {
    const Vec3 c = *cfg.object_center;
    const int g = std::max(1, cfg.object_grid);
    const double step = g > 1 ? cfg.object_size_m / (g - 1) : 0.0;
    Vec3 sum = Vec3::Zero();
    for (int iy = 0; iy < g; ++iy) {
      for (int ix = 0; ix < g; ++ix) {
        const Vec3 p(c.x() - 0.5 * cfg.object_size_m + ix * step,
                     c.y() - 0.5 * cfg.object_size_m + iy * step, c.z());
        scene.object_indices.push_back(static_cast<int>(scene.points.size()));
        scene.points.push_back(p);
        sum += p;
      }
    }
    scene.object_centroid = sum / static_cast<double>(g * g);
  }
  return scene;
}

CameraScript straight_walk(const Vec3& start, double yaw, double step_m, int steps) {
  CameraScript script;
  const Vec3 dir(std::sin(yaw), 0.0, std::cos(yaw));
  for (int k = 0; k <= steps; ++k) {
    script.poses.push_back(CameraPose::from_center_yaw(start + dir * (k * step_m), yaw));
  }
  return script;
}

CameraScript heading_walk(const Vec3& start, const std::vector<double>& headings_rad,
                          double step_m) {
  CameraScript script;
  if (headings_rad.empty()) return script;
  Vec3 c = start;
  script.poses.push_back(CameraPose::from_center_yaw(c, headings_rad.front()));
  for (double yaw : headings_rad) {
    c += Vec3(std::sin(yaw), 0.0, std::cos(yaw)) * step_m;
    script.poses.push_back(CameraPose::from_center_yaw(c, yaw));
  }
  return script;
}

ViewProjection project_view(const Scene& scene, const CameraPose& pose,
                            const SimCamera& cam) {
  ViewProjection out;
  for (std::size_t i = 0; i < scene.points.size(); ++i) {
    if (auto p = visible(cam, pose.to_camera(scene.points[i]))) {
      out.point_index.push_back(static_cast<int>(i));
      out.points.push_back(*p);
    }
  }
  if (out.points.empty()) {
    throw Error(ErrorCode::kNothingVisible, "no scene point projects into the view");
  }
  return out;
}

SimCorrespondences correspond(const Scene& scene, const CameraPose& a,
                              const CameraPose& b, const SimCamera& cam,
                              double noise_sigma_px, double outlier_rate,
                              std::uint64_t seed, const std::vector<int>* subset) {
  std::vector<int> candidates;
  if (subset) {
    candidates = *subset;
  } else {
    candidates.resize(scene.points.size());
    std::iota(candidates.begin(), candidates.end(), 0);
  }
  SimCorrespondences out;
  for (int i : candidates) {
    const auto pa = visible(cam, a.to_camera(scene.points[i]));
    const auto pb = visible(cam, b.to_camera(scene.points[i]));
    if (!pa || !pb) continue;
    out.set.pairs.push_back({*pa, *pb});
    out.point_index.push_back(i);
  }
  if (out.set.pairs.empty()) {
    throw Error(ErrorCode::kNothingVisible, "no point is visible in both views");
  }

  std::mt19937_64 rng(seed);
  const std::size_t n = out.set.size();
  out.is_outlier.assign(n, 0);
  if (noise_sigma_px > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_sigma_px);
    for (auto& c : out.set.pairs) {
      c.p.u += noise(rng);
      c.p.v += noise(rng);
      c.q.u += noise(rng);
      c.q.v += noise(rng);
    }
  }
  const auto n_out = static_cast<std::size_t>(std::lround(outlier_rate * n));
  if (n_out > 0) {
    if (cam.width <= 0 || cam.height <= 0) {
      throw Error(ErrorCode::kInvalidArgument, "outliers need image bounds");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_real_distribution<double> uu(0.0, cam.width);
    std::uniform_real_distribution<double> uv(0.0, cam.height);
    for (std::size_t k = 0; k < std::min(n_out, n); ++k) {
      auto& c = out.set.pairs[order[k]];
      c.q = {uu(rng), uv(rng)};
      out.is_outlier[order[k]] = 1;
    }
  }
  return out;
}

GrayImage render(const Scene& scene, const CameraPose& pose, const SimCamera& cam) {
  if (cam.width < 1 || cam.height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "render needs image bounds");
  }
  GrayImage img(cam.width, cam.height, kBackground);
  struct Splat {
    double depth;
    int index;
    ImagePoint p;
  };
  std::vector<Splat> splats;
  for (std::size_t i = 0; i < scene.points.size(); ++i) {
    const Vec3 Xc = pose.to_camera(scene.points[i]);
    if (!(Xc.z() > kMinDepth)) continue;
    splats.push_back({Xc.z(), static_cast<int>(i), cam.K.project(Xc)});
  }
  std::stable_sort(splats.begin(), splats.end(),
                   [](const Splat& a, const Splat& b) { return a.depth > b.depth; });

  const int half = kStampCells * kStampCell / 2;
  for (const auto& s : splats) {
    if (!std::isfinite(s.p.u) || !std::isfinite(s.p.v)) continue;
    if (s.p.u < -half - 1 || s.p.v < -half - 1 || s.p.u > cam.width + half ||
        s.p.v > cam.height + half) {
      continue;
    }
    const int cx = static_cast<int>(std::lround(s.p.u));
    const int cy = static_cast<int>(std::lround(s.p.v));
    const std::uint64_t bits =
        splitmix64(scene.seed * 0x2545f4914f6cdd1dull + static_cast<std::uint64_t>(s.index));
    for (int dy = -half; dy <= half; ++dy) {
      const int y = cy + dy;
      if (y < 0 || y >= cam.height) continue;
      for (int dx = -half; dx <= half; ++dx) {
        const int x = cx + dx;
        if (x < 0 || x >= cam.width) continue;
        const int cell = ((dy + half) / kStampCell) * kStampCells + (dx + half) / kStampCell;
        img.at(x, y) = (bits >> cell) & 1u ? 228 : 28;
      }
    }
  }
  return img;
}

BoundingBox object_box(const Scene& scene, const CameraPose& pose,
                       const SimCamera& cam, int frame, double margin_px,
                       const std::string& label) {
  double u0 = 1e300, v0 = 1e300, u1 = -1e300, v1 = -1e300;
  int n = 0;
  for (int i : scene.object_indices) {
    const Vec3 Xc = pose.to_camera(scene.points[i]);
    if (!(Xc.z() > kMinDepth)) continue;
    const ImagePoint p = cam.K.project(Xc);
    u0 = std::min(u0, p.u);
    v0 = std::min(v0, p.v);
    u1 = std::max(u1, p.u);
    v1 = std::max(v1, p.v);
    ++n;
  }
  if (n == 0) throw Error(ErrorCode::kNothingVisible, "object is not visible");
  const double umax = cam.width > 0 ? cam.width - 1.0 : 1e300;
  const double vmax = cam.height > 0 ? cam.height - 1.0 : 1e300;
  return BoundingBox::make(frame, label, std::clamp(u0 - margin_px, 0.0, umax),
                           std::clamp(v0 - margin_px, 0.0, vmax),
                           std::clamp(u1 + margin_px, 0.0, umax),
                           std::clamp(v1 + margin_px, 0.0, vmax));
}

void write_sequence(const std::string& dir, const Scene& scene,
                    const CameraScript& script, const SimCamera& cam,
                    const std::string& label) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(fs::path(dir) / "image_0", ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + dir + ": " + ec.message());

  io::write_text(fs::path(dir) / "calib.txt", io::format_kitti_calib(cam.K));

  std::vector<io::GroundTruthPose> gt;
  std::string objects;
  for (std::size_t k = 0; k < script.poses.size(); ++k) {
    const auto& pose = script.poses[k];
    char name[32];
    std::snprintf(name, sizeof name, "%06zu.pgm", k);
    io::write_pgm(fs::path(dir) / "image_0" / name, render(scene, pose, cam));
    gt.push_back({pose.R.transpose(), pose.center()});
    if (!scene.object_indices.empty()) {
      const Vec3 o = pose.to_camera(scene.object_centroid);
      objects += std::to_string(k) + " " + io::format_fixed(o.x()) + " " +
                 io::format_fixed(o.y()) + " " + io::format_fixed(o.z()) + "\n";
    }
  }
  io::write_text(fs::path(dir) / "poses.txt", io::format_kitti_poses(gt));
  if (!scene.object_indices.empty()) {
    io::write_text(fs::path(dir) / "objects.txt", objects);
    const auto box = object_box(scene, script.poses.front(), cam, 0, 8.0, label);
    io::write_text(fs::path(dir) / "bboxes.txt", io::format_bboxes({box}));
  }
}

}  // namespace approach::sim
