#pragma once

// Two-view geometry: calibration, essential matrix estimation under RANSAC,
// pose extraction and DLT triangulation.
//
// Frame convention used throughout the library: a point expressed in the
// reference camera maps into the current camera as
//
//     X_current = R * X_reference + t * scale
//
// so for a camera stepping forward along its optical axis t points along -Z.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "approach/parallel.hpp"

namespace approach {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat34 = Eigen::Matrix<double, 3, 4>;

/// Metric 3D point in some camera frame.
using WorldPoint = Vec3;

struct ImagePoint {
  double u = 0.0;
  double v = 0.0;

  Vec3 homogeneous() const { return {u, v, 1.0}; }
  bool operator==(const ImagePoint&) const = default;
};

/// Pixel coordinates pre-multiplied by K^-1.
struct NormalizedPoint {
  double x = 0.0;
  double y = 0.0;

  Vec3 homogeneous() const { return {x, y, 1.0}; }
  bool operator==(const NormalizedPoint&) const = default;
};

class CameraIntrinsics {
 public:
  /// Throws kInvalidArgument unless both focal lengths are positive and finite.
  CameraIntrinsics(double fu, double fv, double cu, double cv);

  double fu() const { return fu_; }
  double fv() const { return fv_; }
  double cu() const { return cu_; }
  double cv() const { return cv_; }

  Mat3 matrix() const;
  Mat3 inverse() const;

  NormalizedPoint normalize(const ImagePoint& p) const {
    return {(p.u - cu_) / fu_, (p.v - cv_) / fv_};
  }
  ImagePoint denormalize(const NormalizedPoint& x) const {
    return {x.x * fu_ + cu_, x.y * fv_ + cv_};
  }
  /// Pinhole projection of a camera-frame point; requires Z != 0.
  ImagePoint project(const Vec3& X) const {
    return {fu_ * X.x() / X.z() + cu_, fv_ * X.y() / X.z() + cv_};
  }

 private:
  double fu_, fv_, cu_, cv_;
};

std::vector<NormalizedPoint> normalize(std::span<const ImagePoint> points,
                                       const CameraIntrinsics& K);

Mat3 skew(const Vec3& v);

/// An element of the essential manifold: singular values (1, 1, 0), so the
/// Frobenius norm is sqrt(2).
class EssentialMatrix {
 public:
  /// Projects an arbitrary 3x3 matrix onto the manifold.
  static EssentialMatrix project(const Mat3& M);
  /// E = [t]x R for the library frame convention.
  static EssentialMatrix from_pose(const Mat3& R, const Vec3& t);
  /// Wraps M without projecting. Used to feed decompose_essential matrices
  /// that are supposed to already be essential.
  static EssentialMatrix unchecked(const Mat3& M) { return EssentialMatrix(M); }

  const Mat3& matrix() const { return E_; }

  /// q^T E p.
  double algebraic_residual(const NormalizedPoint& p,
                            const NormalizedPoint& q) const;
  /// First-order geometric distance to the epipolar constraint, in
  /// normalized image units.
  double sampson_distance(const NormalizedPoint& p,
                          const NormalizedPoint& q) const;

 private:
  explicit EssentialMatrix(const Mat3& E) : E_(E) {}
  Mat3 E_;
};

enum class ScaleProvenance { kGroundTruthBaseline, kUserSupplied, kUnit };

const char* to_string(ScaleProvenance p);

struct RelativePose {
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::UnitZ();  ///< unit-norm translation direction
  double scale = 1.0;      ///< meters per unit of t
  ScaleProvenance provenance = ScaleProvenance::kUnit;

  /// Normalizes t and validates R, throwing kInvalidArgument on a zero
  /// translation, a non-rotation or a non-positive scale.
  static RelativePose make(const Mat3& R, const Vec3& t, double scale = 1.0,
                           ScaleProvenance provenance = ScaleProvenance::kUnit);

  Vec3 scaled_translation() const { return t * scale; }
  /// Displacement of the camera center from the reference to the current
  /// frame, expressed in the current camera's axes.
  Vec3 motion() const { return -t * scale; }
  /// Camera center of the current frame in reference-frame coordinates.
  Vec3 center_in_reference() const { return -R.transpose() * t * scale; }
  Vec3 transform(const Vec3& X_reference) const {
    return R * X_reference + t * scale;
  }
  RelativePose with_scale(double s, ScaleProvenance p) const;
};

struct Correspondence {
  ImagePoint p;  ///< reference frame
  ImagePoint q;  ///< current frame
};

struct CorrespondenceSet {
  std::vector<Correspondence> pairs;
  /// Empty, or one flag per pair.
  std::vector<char> inlier_mask;

  std::size_t size() const { return pairs.size(); }
  bool has_mask() const { return !inlier_mask.empty(); }
  std::size_t inlier_count() const;
  /// Pairs flagged by the mask; all pairs when there is no mask.
  CorrespondenceSet inliers() const;
};

struct RansacParams {
  double threshold = 1e-3;  ///< Sampson distance, normalized coordinates
  int max_iterations = 2000;
  double confidence = 0.99;  ///< adaptive exit; 1.0 always runs max_iterations
  int min_inliers = 15;
  std::uint64_t seed = 0;
  /// Least-squares refits on the consensus set after sampling.
  int refine_passes = 2;
  /// Levenberg-Marquardt iterations on the Sampson error of the inliers over
  /// (R, t) after pose selection; 0 keeps the linear estimate.
  int nonlinear_iterations = 20;
  Execution execution = Execution::kParallel;
};

struct EssentialEstimate {
  EssentialMatrix E = EssentialMatrix::unchecked(Mat3::Zero());
  std::vector<char> inlier_mask;
  int num_inliers = 0;
  int iterations = 0;
};

/// Normalized 8-point algorithm on calibrated points (at least 8), projected
/// to the essential manifold. Throws kDegenerateGeometry when the design
/// matrix has rank below 8.
EssentialMatrix estimate_essential_8point(std::span<const NormalizedPoint> p,
                                          std::span<const NormalizedPoint> q);

EssentialEstimate estimate_essential_ransac(const CorrespondenceSet& matches,
                                            const CameraIntrinsics& K,
                                            const RansacParams& params);

/// (UWV^T, +u3), (UWV^T, -u3), (UW^TV^T, +u3), (UW^TV^T, -u3).
std::array<RelativePose, 4> decompose_essential(const EssentialMatrix& E,
                                                double tolerance = 1e-6);

struct CheiralityCounts {
  std::array<int, 4> positive_depth{};
  std::array<double, 4> mean_residual{};
  int selected = -1;
};

/// Cheirality test over the inliers of `matches` (all pairs if unmasked).
RelativePose select_pose(const std::array<RelativePose, 4>& candidates,
                         const CorrespondenceSet& matches,
                         const CameraIntrinsics& K,
                         CheiralityCounts* counts = nullptr);

struct TriangulationParams {
  double min_abs_w = 1e-9;
  /// Relative singular-value floor under which A is treated as rank <= 2.
  double rank_tolerance = 1e-12;
};

/// DLT triangulation with J1 = K[I|0], J2 = K[R|t*scale]. The result is in
/// the reference camera frame, in meters when pose.scale is metric.
WorldPoint triangulate(const ImagePoint& p, const ImagePoint& q,
                       const CameraIntrinsics& K, const RelativePose& pose,
                       const TriangulationParams& params = {});

struct PoseEstimate {
  RelativePose pose;
  EssentialEstimate essential;
  CorrespondenceSet inliers;
};

/// Minimizes the summed squared Sampson distance of `inliers` over the five
/// pose degrees of freedom, starting from `pose`. Never increases the cost.
RelativePose refine_pose(const RelativePose& pose, const CorrespondenceSet& inliers,
                         const CameraIntrinsics& K, int iterations);

/// RANSAC essential estimate, decomposition, cheirality selection and
/// Sampson refinement. The returned pose has unit scale.
PoseEstimate estimate_relative_pose(const CorrespondenceSet& matches,
                                    const CameraIntrinsics& K,
                                    const RansacParams& params);

/// Angle of the rotation R_a^T R_b, radians.
double rotation_angle_between(const Mat3& a, const Mat3& b);
/// Angle between two direction vectors, radians.
double angle_between(const Vec3& a, const Vec3& b);

namespace detail {

struct DltSolution {
  Vec4 homogeneous;
  Vec4 singular_values;
};

/// Solves the stacked 4x4 cross-product system for two projection matrices.
DltSolution solve_dlt(const Mat34& J1, const Mat34& J2, const Vec2& p,
                      const Vec2& q);

}  // namespace detail

}  // namespace approach
