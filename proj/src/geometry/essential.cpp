#include <cmath>
#include <optional>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "approach/error.hpp"
#include "approach/geometry.hpp"
#include "geometry/internal.hpp"

namespace approach {
namespace {

// Similarity that moves the centroid to the origin and the mean distance
// from it to sqrt(2).
Mat3 conditioning_transform(std::span<const NormalizedPoint> pts) {
  Vec2 centroid = Vec2::Zero();
  for (const auto& p : pts) centroid += Vec2(p.x, p.y);
  centroid /= static_cast<double>(pts.size());
  double mean_dist = 0.0;
  for (const auto& p : pts) mean_dist += (Vec2(p.x, p.y) - centroid).norm();
  mean_dist /= static_cast<double>(pts.size());
  const double s = mean_dist > 0.0 ? std::sqrt(2.0) / mean_dist : 1.0;
  Mat3 T;
  T << s, 0.0, -s * centroid.x(), 0.0, s, -s * centroid.y(), 0.0, 0.0, 1.0;
  return T;
}

}  // namespace

EssentialMatrix EssentialMatrix::project(const Mat3& M) {
  Eigen::JacobiSVD<Mat3> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (!(svd.singularValues()(0) > 0.0)) {
    throw Error(ErrorCode::kDegenerateGeometry, "cannot project a zero matrix");
  }
  const Vec3 d(1.0, 1.0, 0.0);
  return EssentialMatrix(svd.matrixU() * d.asDiagonal() *
                         svd.matrixV().transpose());
}

EssentialMatrix EssentialMatrix::from_pose(const Mat3& R, const Vec3& t) {
  return project(skew(t.normalized()) * R);
}

double EssentialMatrix::algebraic_residual(const NormalizedPoint& p,
                                           const NormalizedPoint& q) const {
  return q.homogeneous().dot(E_ * p.homogeneous());
}

double EssentialMatrix::sampson_distance(const NormalizedPoint& p,
                                         const NormalizedPoint& q) const {
  const Vec3 ph = p.homogeneous();
  const Vec3 qh = q.homogeneous();
  const Vec3 Ep = E_ * ph;
  const Vec3 Etq = E_.transpose() * qh;
  const double r = qh.dot(Ep);
  const double denom = Ep.x() * Ep.x() + Ep.y() * Ep.y() + Etq.x() * Etq.x() +
                       Etq.y() * Etq.y();
  if (denom <= 0.0) return r == 0.0 ? 0.0 : std::abs(r) * 1e300;
  return std::abs(r) / std::sqrt(denom);
}

namespace detail {

std::optional<EssentialMatrix> solve_8point(std::span<const NormalizedPoint> p,
                                            std::span<const NormalizedPoint> q) {
  const Mat3 Tp = conditioning_transform(p);
  const Mat3 Tq = conditioning_transform(q);

  const Eigen::Index rows = std::max<Eigen::Index>(9, p.size());
  Eigen::Matrix<double, Eigen::Dynamic, 9> A =
      Eigen::Matrix<double, Eigen::Dynamic, 9>::Zero(rows, 9);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec3 a = Tp * p[i].homogeneous();
    const Vec3 b = Tq * q[i].homogeneous();
    A.row(static_cast<Eigen::Index>(i)) << b.x() * a.x(), b.x() * a.y(), b.x(),
        b.y() * a.x(), b.y() * a.y(), b.y(), a.x(), a.y(), 1.0;
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, Eigen::Dynamic, 9>> svd(
      A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(7) < 1e-10 * sv(0)) return std::nullopt;
  const Eigen::Matrix<double, 9, 1> e = svd.matrixV().col(8);
  Mat3 Ec;
  Ec << e(0), e(1), e(2), e(3), e(4), e(5), e(6), e(7), e(8);
  // Rank 2 in conditioned coordinates; the manifold projection follows once
  // T is undone.
  Eigen::JacobiSVD<Mat3> inner(Ec, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 s = inner.singularValues();
  const Mat3 Eproj = inner.matrixU() * Vec3(s(0), s(1), 0.0).asDiagonal() *
                     inner.matrixV().transpose();
  const Mat3 E = Tq.transpose() * Eproj * Tp;
  if (!(E.norm() > 0.0) || !E.allFinite()) return std::nullopt;
  return EssentialMatrix::project(E);
}

}  // namespace detail

EssentialMatrix estimate_essential_8point(std::span<const NormalizedPoint> p,
                                          std::span<const NormalizedPoint> q) {
  if (p.size() != q.size() || p.size() < 8) {
    throw Error(ErrorCode::kTooFewMatches,
                "8-point solver needs at least 8 paired points");
  }
  auto E = detail::solve_8point(p, q);
  if (!E) {
    throw Error(ErrorCode::kDegenerateGeometry,
                "epipolar design matrix has rank below 8");
  }
  return *E;
}

std::array<RelativePose, 4> decompose_essential(const EssentialMatrix& E,
                                                double tolerance) {
  Eigen::JacobiSVD<Mat3> svd(E.matrix(),
                             Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 s = svd.singularValues();
  if (!(s(0) > 0.0) || (s(0) - s(1)) / s(0) > tolerance ||
      s(2) / s(0) > tolerance) {
    throw Error(ErrorCode::kNotEssential,
                "singular values are not of the form (s, s, 0)");
  }
  Mat3 U = svd.matrixU();
  Mat3 V = svd.matrixV();
  if (U.determinant() < 0.0) U = -U;
  if (V.determinant() < 0.0) V = -V;
  Mat3 W;
  W << 0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0;
  Mat3 R1 = U * W * V.transpose();
  Mat3 R2 = U * W.transpose() * V.transpose();
  if (R1.determinant() < 0.0) R1 = -R1;
  if (R2.determinant() < 0.0) R2 = -R2;
  const Vec3 t = U.col(2).normalized();

  std::array<RelativePose, 4> out;
  out[0].R = R1;
  out[0].t = t;
  out[1].R = R1;
  out[1].t = -t;
  out[2].R = R2;
  out[2].t = t;
  out[3].R = R2;
  out[3].t = -t;
  return out;
}

}  // namespace approach
