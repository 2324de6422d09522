#pragma once

// Initial target localization from the first two frames: pose from full-frame
// features, object centers from the features inside the bounding box, and
// triangulation of the two centers.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "approach/features.hpp"
#include "approach/geometry.hpp"
#include "approach/matching.hpp"

namespace approach {

struct BoundingBox {
  Rect rect;
  std::string label;
  int frame = 0;

  /// Throws kInvertedBox unless u_min < u_max and v_min < v_max.
  static BoundingBox make(int frame, std::string label, double u_min,
                          double v_min, double u_max, double v_max);
  ImagePoint center() const {
    return {0.5 * (rect.u_min + rect.u_max), 0.5 * (rect.v_min + rect.v_max)};
  }
  bool inside(int width, int height) const {
    return rect.u_min >= 0 && rect.v_min >= 0 && rect.u_max <= width - 1 &&
           rect.v_max <= height - 1;
  }
};

struct ObjectLocation {
  WorldPoint position = WorldPoint::Zero();  ///< camera frame of `frame`
  int frame = 0;
  ScaleProvenance provenance = ScaleProvenance::kUnit;
};

/// Where a metric scale for a unit-norm translation comes from.
struct ScaleSource {
  enum class Kind { kGroundTruth, kFixed, kUnit };
  Kind kind = Kind::kUnit;
  /// Baseline magnitude for kGroundTruth, step length for kFixed.
  double meters = 1.0;

  static ScaleSource ground_truth(double baseline_m) {
    return {Kind::kGroundTruth, baseline_m};
  }
  static ScaleSource fixed(double step_m) { return {Kind::kFixed, step_m}; }
  static ScaleSource unit() { return {Kind::kUnit, 1.0}; }

  double value() const { return kind == Kind::kUnit ? 1.0 : meters; }
  ScaleProvenance provenance() const;
};

struct LocalizationParams {
  FeatureConfig features;
  MatchParams matching;
  RansacParams ransac;
  int min_object_features = 5;
  /// Use the box center as p instead of the feature centroid.
  bool use_box_center = false;
  /// Median feature displacement below which the pair is refused.
  double min_parallax_px = 1.0;
  /// Reject object pairs inconsistent with the estimated pose.
  bool epipolar_filter = true;
};

/// Mean of level-0 keypoint positions, restricted to `indices` if given.
/// Throws kTooFewObjectFeatures below `min_features`.
ImagePoint object_center(const FeatureSet& fs,
                         const std::optional<std::vector<int>>& indices = std::nullopt,
                         int min_features = 5);

struct LocalizationResult {
  ObjectLocation location;
  RelativePose pose;  ///< frame1 -> frame2, carrying the applied scale
  ImagePoint p;       ///< object center in frame1
  ImagePoint q;       ///< object center in frame2
  CorrespondenceSet pose_inliers;
  CorrespondenceSet object_pairs;
};

/// Median pixel displacement over all pairs (0 for an empty set).
double median_displacement(const CorrespondenceSet& matches);

/// Core of localize_object for callers that already hold correspondences:
/// `full` drives the pose, `object` holds (frame1 feature in the box,
/// matched frame2 partner) pairs.
LocalizationResult localize_from_matches(const CorrespondenceSet& full,
                                         const CorrespondenceSet& object,
                                         const BoundingBox& box,
                                         const CameraIntrinsics& K,
                                         const ScaleSource& scale,
                                         const LocalizationParams& params = {});

LocalizationResult localize_object(const GrayImage& frame1,
                                   const GrayImage& frame2,
                                   const BoundingBox& box,
                                   const CameraIntrinsics& K,
                                   const ScaleSource& scale,
                                   const LocalizationParams& params = {});

}  // namespace approach
