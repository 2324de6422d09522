#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "approach/error.hpp"
#include "approach/geometry.hpp"

namespace approach {

RelativePose RelativePose::make(const Mat3& R, const Vec3& t, double scale,
                                ScaleProvenance provenance) {
  const double norm = t.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kInvalidArgument, "translation must be nonzero");
  }
  if ((R.transpose() * R - Mat3::Identity()).norm() > 1e-6 ||
      std::abs(R.determinant() - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidArgument, "R is not a rotation");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::kInvalidArgument, "scale must be positive");
  }
  RelativePose pose;
  pose.R = R;
  pose.t = t / norm;
  pose.scale = scale;
  pose.provenance = provenance;
  return pose;
}

RelativePose RelativePose::with_scale(double s, ScaleProvenance p) const {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw Error(ErrorCode::kInvalidArgument, "scale must be positive");
  }
  RelativePose out = *this;
  out.scale = s;
  out.provenance = p;
  return out;
}

double rotation_angle_between(const Mat3& a, const Mat3& b) {
  const Mat3 d = a.transpose() * b;
  // atan2 form stays accurate near zero where acos((tr - 1) / 2) does not.
  const Vec3 axis(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1));
  return std::atan2(0.5 * axis.norm(), 0.5 * (d.trace() - 1.0));
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

namespace {

using Residuals = Eigen::VectorXd;

Residuals sampson_residuals(const Mat3& R, const Vec3& t,
                            const std::vector<NormalizedPoint>& p,
                            const std::vector<NormalizedPoint>& q) {
  const Mat3 E = skew(t) * R;
  Residuals r(static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec3 x1(p[i].x, p[i].y, 1.0), x2(q[i].x, q[i].y, 1.0);
    const Vec3 Ex1 = E * x1, Etx2 = E.transpose() * x2;
    const double den = Ex1.head<2>().squaredNorm() + Etx2.head<2>().squaredNorm();
    r(static_cast<Eigen::Index>(i)) = den > 0.0 ? x2.dot(Ex1) / std::sqrt(den) : 0.0;
  }
  return r;
}

Mat3 exp_so3(const Vec3& w) {
  const double a = w.norm();
  if (a == 0.0) return Mat3::Identity();
  return Eigen::AngleAxisd(a, w / a).toRotationMatrix();
}

// Rotation about the left, translation on the sphere through a tangent basis.
void apply_step(const Mat3& R, const Vec3& t, const Eigen::Matrix<double, 5, 1>& d,
                const Vec3& b1, const Vec3& b2, Mat3& R_out, Vec3& t_out) {
  R_out = exp_so3(d.head<3>()) * R;
  t_out = (t + d(3) * b1 + d(4) * b2).normalized();
}

}  // namespace

RelativePose refine_pose(const RelativePose& pose, const CorrespondenceSet& inliers,
                         const CameraIntrinsics& K, int iterations) {
  if (iterations <= 0 || inliers.size() < 6) return pose;
  std::vector<NormalizedPoint> p, q;
  for (const auto& c : inliers.pairs) {
    p.push_back(K.normalize(c.p));
    q.push_back(K.normalize(c.q));
  }
  Mat3 R = pose.R;
  Vec3 t = pose.t;
  Residuals r = sampson_residuals(R, t, p, q);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  constexpr double kStep = 1e-7;
  for (int it = 0; it < iterations && cost > 0.0; ++it) {
    Vec3 b1 = t.unitOrthogonal();
    Vec3 b2 = t.cross(b1);
    Eigen::MatrixXd J(r.size(), 5);
    for (int k = 0; k < 5; ++k) {
      Eigen::Matrix<double, 5, 1> d = Eigen::Matrix<double, 5, 1>::Zero();
      d(k) = kStep;
      Mat3 Rk;
      Vec3 tk;
      apply_step(R, t, d, b1, b2, Rk, tk);
      J.col(k) = (sampson_residuals(Rk, tk, p, q) - r) / kStep;
    }
    const Eigen::Matrix<double, 5, 5> JtJ = J.transpose() * J;
    const Eigen::Matrix<double, 5, 1> g = J.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 10 && !improved; ++tries) {
      Eigen::Matrix<double, 5, 5> A = JtJ;
      A.diagonal() *= 1.0 + lambda;
      const Eigen::Matrix<double, 5, 1> d = -A.ldlt().solve(g);
      if (!d.allFinite()) break;
      Mat3 Rn;
      Vec3 tn;
      apply_step(R, t, d, b1, b2, Rn, tn);
      const Residuals rn = sampson_residuals(Rn, tn, p, q);
      const double cn = rn.squaredNorm();
      if (cn < cost) {
        R = Rn;
        t = tn;
        r = rn;
        const double gain = cost - cn;
        cost = cn;
        lambda = std::max(lambda * 0.1, 1e-12);
        improved = true;
        if (gain <= 1e-15 * cost) it = iterations;
      } else {
        lambda *= 10.0;
      }
    }
    if (!improved) break;
  }
  // Re-orthonormalize to keep RelativePose::make's tolerance.
  Eigen::JacobiSVD<Mat3> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  R = svd.matrixU() * svd.matrixV().transpose();
  return RelativePose::make(R, t, pose.scale, pose.provenance);
}

constexpr int kReclassifyRounds = 3;

PoseEstimate estimate_relative_pose(const CorrespondenceSet& matches,
                                    const CameraIntrinsics& K,
                                    const RansacParams& params) {
  PoseEstimate out;
  out.essential = estimate_essential_ransac(matches, K, params);
  CorrespondenceSet masked;
  masked.pairs = matches.pairs;
  masked.inlier_mask = out.essential.inlier_mask;
  out.inliers = masked.inliers();
  const auto candidates = decompose_essential(out.essential.E);
  out.pose = select_pose(candidates, out.inliers, K);
  if (params.nonlinear_iterations <= 0) return out;
  // Alternate refinement and reclassification until the inlier set settles.
  for (int round = 0; round < kReclassifyRounds; ++round) {
    out.pose = refine_pose(out.pose, out.inliers, K, params.nonlinear_iterations);
    out.essential.E = EssentialMatrix::from_pose(out.pose.R, out.pose.t);
    std::vector<char> mask(matches.size(), 0);
    int count = 0;
    for (std::size_t i = 0; i < matches.size(); ++i) {
      const auto& c = matches.pairs[i];
      if (out.essential.E.sampson_distance(K.normalize(c.p), K.normalize(c.q)) < params.threshold) {
        mask[i] = 1;
        ++count;
      }
    }
    if (mask == out.essential.inlier_mask || count < params.min_inliers) break;
    out.essential.inlier_mask = std::move(mask);
    out.essential.num_inliers = count;
    masked.inlier_mask = out.essential.inlier_mask;
    out.inliers = masked.inliers();
  }
  return out;
}

}  // namespace approach
