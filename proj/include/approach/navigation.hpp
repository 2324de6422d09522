#pragma once

// Continuous guidance loop: per-step pose, object update, ground-plane path
// angle and advice.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "approach/features.hpp"
#include "approach/geometry.hpp"
#include "approach/localization.hpp"

namespace approach {

enum class UpdateMode {
  kTranslationOnly,  ///< o' = o - d, d the camera displacement; rotation ignored
  kRigid,  ///< o' = R o + t * scale
};

enum class AdviceKind { kOnCourse, kVeerLeft, kVeerRight, kArrived };

const char* to_string(AdviceKind kind);
const char* to_string(UpdateMode mode);

struct Advice {
  AdviceKind kind = AdviceKind::kOnCourse;
  double angle_deg = 0.0;
  std::string message;
};

struct NavConfig {
  double angle_threshold_deg = 30.0;
  int frame_interval = 1;
  UpdateMode update_mode = UpdateMode::kRigid;
  ScaleSource::Kind scale = ScaleSource::Kind::kGroundTruth;
  /// Step length for ScaleSource::Kind::kFixed.
  double fixed_step_m = 1.0;
  double arrival_radius_m = 0.5;
  LocalizationParams pipeline;

  /// Throws kInvalidArgument outside 0 < threshold < 180, interval >= 1.
  void validate() const;
};

ObjectLocation update_object(const ObjectLocation& o, const RelativePose& pose,
                             UpdateMode mode);

/// Signed angle in degrees from `heading` to `object`, both projected on the
/// X-Z plane; positive when the object is to the right (+X).
/// Throws kArrived when the object is within `arrival_radius` on the ground
/// plane and kNoHorizontalMotion when the heading has no X-Z component.
double path_angle(const Vec3& object, const Vec3& heading,
                  double arrival_radius = 0.5);
/// Uses the camera displacement of `motion` as the heading.
double path_angle(const ObjectLocation& o, const RelativePose& motion,
                  double arrival_radius = 0.5);

Advice advise(double angle_deg, const NavConfig& cfg);
Advice arrived_advice(double distance_m);

/// Ground-plane (X, Z) distance from the camera to a point.
double ground_distance(const Vec3& p);

struct NavRecord {
  int frame = 0;
  int reference_frame = 0;
  bool skipped = false;
  std::string error;  ///< set on skipped steps
  RelativePose pose;  ///< reference -> frame, scaled
  ObjectLocation object;
  std::optional<double> angle_deg;
  Advice advice;
  Vec3 camera_position = Vec3::Zero();  ///< start-frame coordinates
  std::optional<Vec3> gt_position;      ///< filled by callers that have it
  CorrespondenceSet inliers;
};

struct NavLog {
  int start_frame = 0;
  ObjectLocation initial_object;
  std::vector<NavRecord> records;
  bool arrived = false;

  std::size_t skipped_count() const;
};

/// Returns the metric baseline between two frame indices, for
/// ScaleSource::Kind::kGroundTruth.
using BaselineFn = std::function<double(int reference, int current)>;

/// One navigation run, advanced one processed frame at a time. Failed steps
/// are logged and skipped: the object, cumulative pose and reference frame
/// are held so the next step measures from the last good frame.
class NavigationSession {
 public:
  NavigationSession(CameraIntrinsics K, NavConfig cfg, BaselineFn baseline = {});

  /// Starts from a two-frame localization (frame0 -> frame1).
  const NavRecord& initialize(int frame0, int frame1,
                              const LocalizationResult& init);
  /// Feeds correspondences between reference_frame() and `frame`.
  const NavRecord& step(int frame, const CorrespondenceSet& matches);

  int reference_frame() const { return reference_frame_; }
  bool arrived() const { return log_.arrived; }
  const ObjectLocation& object() const { return object_; }
  const NavLog& log() const { return log_; }
  NavLog take_log() { return std::move(log_); }

  ScaleSource scale_for(int reference, int current) const;

 private:
  NavRecord& record_motion(int frame, const RelativePose& pose,
                           CorrespondenceSet inliers);

  CameraIntrinsics K_;
  NavConfig cfg_;
  BaselineFn baseline_;
  NavLog log_;
  ObjectLocation object_;
  Mat3 R_total_ = Mat3::Identity();
  Vec3 t_total_ = Vec3::Zero();
  int reference_frame_ = 0;
  bool initialized_ = false;
};

/// Image-driven loop over `frames` (frames[i] has index first_frame + i).
/// The box must lie on frames[0]. Throws kInitializationFailed when the first
/// pair cannot be localized.
NavLog run_navigation(const std::vector<GrayImage>& frames, const BoundingBox& box,
                      const CameraIntrinsics& K, const NavConfig& cfg,
                      BaselineFn baseline = {}, int first_frame = 0);

}  // namespace approach
