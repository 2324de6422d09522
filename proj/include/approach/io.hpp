#pragma once

// Dataset ingestion (KITTI odometry layout, PGM/PNG frames, annotations) and
// result serialization.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "approach/features.hpp"
#include "approach/geometry.hpp"
#include "approach/localization.hpp"
#include "approach/navigation.hpp"

namespace approach::io {

namespace fs = std::filesystem;

/// Locale-independent fixed notation with 9 decimals.
std::string format_fixed(double v);

std::vector<std::uint8_t> read_bytes(const fs::path& path);
std::string read_text(const fs::path& path);
void write_text(const fs::path& path, std::string_view text);

// --- calibration -----------------------------------------------------------

CameraIntrinsics parse_kitti_calib(std::string_view text, std::string_view camera = "P0");
CameraIntrinsics read_kitti_calib(const fs::path& path, std::string_view camera = "P0");
std::string format_kitti_calib(const CameraIntrinsics& K);

// --- ground-truth poses ----------------------------------------------------

/// Camera-to-world [R|t] in meters.
struct GroundTruthPose {
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::Zero();
};

std::vector<GroundTruthPose> parse_kitti_poses(std::string_view text);
std::vector<GroundTruthPose> read_kitti_poses(const fs::path& path);
std::string format_kitti_poses(const std::vector<GroundTruthPose>& poses);

/// Camera displacement from a to b, in a's camera axes.
Vec3 ground_truth_step(const GroundTruthPose& a, const GroundTruthPose& b);
/// a -> b in the library convention, scaled by the metric baseline.
RelativePose relative_ground_truth(const GroundTruthPose& a, const GroundTruthPose& b);
/// Camera center of b in a's camera frame.
Vec3 center_in(const GroundTruthPose& a, const GroundTruthPose& b);

// --- images ----------------------------------------------------------------

/// Binary PGM (P5, maxval 255) or 8-bit gray/RGB PNG. RGB is reduced with
/// round(0.299 R + 0.587 G + 0.114 B).
GrayImage decode_image(std::span<const std::uint8_t> bytes);
GrayImage read_image(const fs::path& path);

std::vector<std::uint8_t> encode_pgm(const GrayImage& img);
std::vector<std::uint8_t> encode_png(const GrayImage& img);
void write_pgm(const fs::path& path, const GrayImage& img);
void write_png(const fs::path& path, const GrayImage& img);
/// 8-bit RGB PNG, for tests of the luma path.
std::vector<std::uint8_t> encode_png_rgb(int width, int height,
                                         std::span<const std::uint8_t> rgb);

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  ///< 3 bytes per pixel, row-major

  RgbImage() = default;
  explicit RgbImage(const GrayImage& gray);
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
  std::array<std::uint8_t, 3> get(int x, int y) const;
};

std::vector<std::uint8_t> encode_ppm(const RgbImage& img);
RgbImage decode_ppm(std::span<const std::uint8_t> bytes);
void write_ppm(const fs::path& path, const RgbImage& img);

// --- annotations -----------------------------------------------------------

/// One "frame label u_min v_min u_max v_max" record per line; blank lines
/// and lines starting with '#' are ignored.
std::vector<BoundingBox> parse_bboxes(std::string_view text);
std::vector<BoundingBox> read_bboxes(const fs::path& path);
std::string format_bboxes(const std::vector<BoundingBox>& boxes);

/// Ground-truth object center per frame, in that frame's camera axes.
struct ObjectTruth {
  int frame = 0;
  Vec3 position = Vec3::Zero();
};
std::vector<ObjectTruth> parse_object_positions(std::string_view text);
std::vector<ObjectTruth> read_object_positions(const fs::path& path);

// --- sequences -------------------------------------------------------------

struct SequenceOptions {
  std::string camera = "P0";
  std::optional<int> first;
  std::optional<int> last;
  std::optional<fs::path> poses_path;
  std::optional<fs::path> objects_path;
};

struct SequenceManifest {
  std::vector<fs::path> image_paths;
  std::vector<int> frame_indices;
  CameraIntrinsics K{1.0, 1.0, 0.0, 0.0};
  std::optional<std::vector<GroundTruthPose>> poses;  ///< one per image
  std::vector<ObjectTruth> objects;

  std::optional<int> position_of(int frame) const;
  std::vector<GrayImage> load_images() const;
};

/// Reads `dir/calib.txt` and `dir/image_<n>/` (n from the camera id). Poses
/// come from `poses_path`, `dir/poses.txt` or the KITTI `../../poses/<seq>.txt`;
/// objects from `objects_path` or `dir/objects.txt`.
SequenceManifest load_sequence(const fs::path& dir, const SequenceOptions& opts = {});

// --- outputs ---------------------------------------------------------------

inline constexpr std::string_view kTrajectoryHeader = "frame,tx,ty,tz,gt_tx,gt_ty,gt_tz";
inline constexpr std::string_view kAdviceHeader = "frame,angle_deg,advice";
inline constexpr std::string_view kObjectHeader = "frame,x,y,z";

std::string format_trajectory_csv(const NavLog& log);
std::string format_advice_csv(const NavLog& log);
/// Initial object estimate at the start frame, then o' per record.
std::string format_object_csv(const NavLog& log);

struct TrajectoryRow {
  int frame = 0;
  Vec3 estimate = Vec3::Zero();
  std::optional<Vec3> ground_truth;
};
std::vector<TrajectoryRow> parse_trajectory_csv(std::string_view text);

struct AdviceRow {
  int frame = 0;
  std::optional<double> angle_deg;
  std::string advice;
};
std::vector<AdviceRow> parse_advice_csv(std::string_view text);

struct ObjectRow {
  int frame = 0;
  Vec3 position = Vec3::Zero();
};
std::vector<ObjectRow> parse_object_csv(std::string_view text);

struct OverlayOptions {
  bool enabled = false;
  /// frames[i] is frame index first_frame + i.
  const std::vector<GrayImage>* frames = nullptr;
  int first_frame = 0;
  std::optional<CameraIntrinsics> K;
};

struct OverlayMarker {
  int frame = 0;
  int u = 0;
  int v = 0;
  bool drawn = false;
};

/// Marker and banner colors used by the overlay renderer.
inline constexpr std::array<std::uint8_t, 3> kObjectMarkerColor{255, 0, 255};

/// Renders one overlay for a log record: features (green), inlier matches
/// (yellow), the reprojected object (magenta cross) and an advice banner.
RgbImage render_overlay(const GrayImage& frame, const NavRecord& rec,
                        const CameraIntrinsics& K, OverlayMarker* marker = nullptr);

struct OutputSummary {
  fs::path trajectory_csv;
  fs::path advice_csv;
  fs::path object_csv;
  std::vector<fs::path> overlays;
  std::vector<OverlayMarker> markers;
};

/// Writes trajectory.csv, advice.csv and object.csv, plus overlay_NNNNNN.ppm per step
/// when overlays are enabled.
OutputSummary write_outputs(const NavLog& log, const fs::path& dir,
                            const OverlayOptions& overlays = {});

}  // namespace approach::io
