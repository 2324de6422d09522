#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

#include "approach/error.hpp"
#include "approach/geometry.hpp"

namespace approach {
namespace detail {

DltSolution solve_dlt(const Mat34& J1, const Mat34& J2, const Vec2& p,
                      const Vec2& q) {
  Eigen::Matrix4d A;
  A.row(0) = p.x() * J1.row(2) - J1.row(0);
  A.row(1) = p.y() * J1.row(2) - J1.row(1);
  A.row(2) = q.x() * J2.row(2) - J2.row(0);
  A.row(3) = q.y() * J2.row(2) - J2.row(1);
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(A, Eigen::ComputeFullV);
  // Singular values come out in descending order, so the null-space
  // estimate is the last right-singular vector.
  return {svd.matrixV().col(3), svd.singularValues()};
}

}  // namespace detail

namespace {

Mat34 projection(const Mat3& K, const Mat3& R, const Vec3& t) {
  Mat34 J;
  J.leftCols<3>() = K * R;
  J.col(3) = K * t;
  return J;
}

}  // namespace

WorldPoint triangulate(const ImagePoint& p, const ImagePoint& q,
                       const CameraIntrinsics& K, const RelativePose& pose,
                       const TriangulationParams& params) {
  const Mat3 Km = K.matrix();
  const Mat34 J1 = projection(Km, Mat3::Identity(), Vec3::Zero());
  const Mat34 J2 = projection(Km, pose.R, pose.scaled_translation());
  const auto sol = detail::solve_dlt(J1, J2, {p.u, p.v}, {q.u, q.v});
  const auto& sv = sol.singular_values;
  if (!(sv(0) > 0.0) || sv(2) <= params.rank_tolerance * sv(0)) {
    throw Error(ErrorCode::kEpipoleDegenerate,
                "viewing rays are coincident; depth is unconstrained");
  }
  const double w = sol.homogeneous(3);
  if (std::abs(w) < params.min_abs_w) {
    throw Error(ErrorCode::kPointAtInfinity, "homogeneous W is ~0");
  }
  const Vec3 X = sol.homogeneous.head<3>() / w;
  const double z2 = pose.transform(X).z();
  if (!(X.z() > 0.0) || !(z2 > 0.0)) {
    throw Error(ErrorCode::kBehindCamera,
                "triangulated point lies behind a camera");
  }
  return X;
}

RelativePose select_pose(const std::array<RelativePose, 4>& candidates,
                         const CorrespondenceSet& matches,
                         const CameraIntrinsics& K, CheiralityCounts* counts) {
  const CorrespondenceSet used = matches.inliers();
  std::vector<NormalizedPoint> p, q;
  p.reserve(used.size());
  q.reserve(used.size());
  for (const auto& c : used.pairs) {
    p.push_back(K.normalize(c.p));
    q.push_back(K.normalize(c.q));
  }

  CheiralityCounts local;
  const Mat34 J1 = projection(Mat3::Identity(), Mat3::Identity(), Vec3::Zero());
  for (int c = 0; c < 4; ++c) {
    const auto& cand = candidates[c];
    const Mat34 J2 = projection(Mat3::Identity(), cand.R, cand.t);
    const auto E = EssentialMatrix::from_pose(cand.R, cand.t);
    int positive = 0;
    double residual = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      residual += E.sampson_distance(p[i], q[i]);
      const auto sol =
          detail::solve_dlt(J1, J2, {p[i].x, p[i].y}, {q[i].x, q[i].y});
      const double w = sol.homogeneous(3);
      if (std::abs(w) < 1e-12) continue;
      const Vec3 X = sol.homogeneous.head<3>() / w;
      if (X.z() > 0.0 && (cand.R * X + cand.t).z() > 0.0) ++positive;
    }
    local.positive_depth[c] = positive;
    local.mean_residual[c] =
        p.empty() ? 0.0 : residual / static_cast<double>(p.size());
  }

  std::array<int, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (local.positive_depth[a] != local.positive_depth[b]) {
      return local.positive_depth[a] > local.positive_depth[b];
    }
    return local.mean_residual[a] < local.mean_residual[b];
  });
  const int best = local.positive_depth[order[0]];
  const int second = local.positive_depth[order[1]];
  if (counts) *counts = local;
  if (best == 0 || best - second <= 0.05 * best) {
    throw Error(ErrorCode::kAmbiguousCheirality,
                "top candidates have " + std::to_string(best) + " and " +
                    std::to_string(second) + " points in front");
  }
  local.selected = order[0];
  if (counts) *counts = local;
  return candidates[order[0]];
}

}  // namespace approach
