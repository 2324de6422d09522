#pragma once

// Synthetic-scene oracle: seeded 3D scenes, scripted camera walks, exact or
// perturbed correspondences and rendered frames.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "approach/features.hpp"
#include "approach/geometry.hpp"
#include "approach/localization.hpp"

namespace approach::sim {

/// World-to-camera transform: X_camera = R * X_world + t.
struct CameraPose {
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::Zero();

  /// Camera at `center` facing along yaw (radians, positive turns right
  /// toward +X) with Y down.
  static CameraPose from_center_yaw(const Vec3& center, double yaw);
  /// Camera at `center` whose optical axis points at `target`.
  static CameraPose look_at(const Vec3& center, const Vec3& target);

  Vec3 center() const { return -R.transpose() * t; }
  Vec3 to_camera(const Vec3& X_world) const { return R * X_world + t; }
};

/// Ground-truth relative pose a -> b in the library convention, with the
/// metric baseline as its scale.
RelativePose relative_pose(const CameraPose& a, const CameraPose& b);

struct SimCamera {
  CameraIntrinsics K{500.0, 500.0, 320.0, 240.0};
  /// 0 disables the image-bounds visibility test.
  int width = 640;
  int height = 480;
};

struct Scene {
  std::vector<Vec3> points;      ///< world frame, meters
  std::vector<int> object_indices;
  Vec3 object_centroid = Vec3::Zero();
  std::uint64_t seed = 0;
};

struct SceneConfig {
  int background_points = 300;
  Vec3 box_min{-8.0, -3.0, 4.0};
  Vec3 box_max{8.0, 3.0, 20.0};
  /// Target object: a planar grid facing the start camera along -Z.
  std::optional<Vec3> object_center;
  int object_grid = 5;  ///< object_grid^2 points
  double object_size_m = 0.6;
  std::uint64_t seed = 1;
};

Scene make_scene(const SceneConfig& cfg);

struct CameraScript {
  std::vector<CameraPose> poses;
};

/// `steps + 1` poses walking along a fixed yaw.
CameraScript straight_walk(const Vec3& start, double yaw, double step_m, int steps);
/// One yaw per step; the camera turns to the step's yaw and then moves
/// `step_m` along it. Pose 0 uses headings_rad.front().
CameraScript heading_walk(const Vec3& start, const std::vector<double>& headings_rad,
                          double step_m);

struct ViewProjection {
  std::vector<int> point_index;
  std::vector<ImagePoint> points;
};

/// Exact pinhole projection of the points in front of the camera (and inside
/// the image when the camera has bounds). Throws kNothingVisible.
ViewProjection project_view(const Scene& scene, const CameraPose& pose,
                            const SimCamera& cam);

struct SimCorrespondences {
  CorrespondenceSet set;
  std::vector<char> is_outlier;
  std::vector<int> point_index;  ///< -1 never; outliers keep their source index
};

/// Points visible in both views, Gaussian pixel noise on both sides, and
/// exactly round(outlier_rate * n) pairs whose second point is replaced by a
/// uniform draw over the image.
SimCorrespondences correspond(const Scene& scene, const CameraPose& a,
                              const CameraPose& b, const SimCamera& cam,
                              double noise_sigma_px, double outlier_rate,
                              std::uint64_t seed,
                              const std::vector<int>* subset = nullptr);

inline constexpr std::uint8_t kBackground = 128;
inline constexpr int kStampCells = 5;
inline constexpr int kStampCell = 3;

/// Draws a per-point random 5x5 checker stamp at every projected point, far
/// to near, on a mid-gray background. Empty scenes give a uniform image.
GrayImage render(const Scene& scene, const CameraPose& pose, const SimCamera& cam);

/// Tight box around the projected object points, grown by `margin_px` and
/// clipped to the image.
BoundingBox object_box(const Scene& scene, const CameraPose& pose,
                       const SimCamera& cam, int frame, double margin_px = 8.0,
                       const std::string& label = "object");

/// Writes calib.txt, image_0/NNNNNN.pgm, poses.txt (KITTI camera-to-world),
/// bboxes.txt and objects.txt under `dir`.
void write_sequence(const std::string& dir, const Scene& scene,
                    const CameraScript& script, const SimCamera& cam,
                    const std::string& label = "object");

}  // namespace approach::sim
