#include <cmath>

#include "approach/error.hpp"
#include "approach/geometry.hpp"

namespace approach {

CameraIntrinsics::CameraIntrinsics(double fu, double fv, double cu, double cv)
    : fu_(fu), fv_(fv), cu_(cu), cv_(cv) {
  if (!(fu > 0.0) || !(fv > 0.0) || !std::isfinite(fu) || !std::isfinite(fv) ||
      !std::isfinite(cu) || !std::isfinite(cv)) {
    throw Error(ErrorCode::kInvalidArgument,
                "camera intrinsics need finite positive focal lengths");
  }
}

Mat3 CameraIntrinsics::matrix() const {
  Mat3 K;
  K << fu_, 0.0, cu_, 0.0, fv_, cv_, 0.0, 0.0, 1.0;
  return K;
}

Mat3 CameraIntrinsics::inverse() const {
  Mat3 Kinv;
  Kinv << 1.0 / fu_, 0.0, -cu_ / fu_, 0.0, 1.0 / fv_, -cv_ / fv_, 0.0, 0.0, 1.0;
  return Kinv;
}

std::vector<NormalizedPoint> normalize(std::span<const ImagePoint> points,
                                       const CameraIntrinsics& K) {
  std::vector<NormalizedPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(K.normalize(p));
  return out;
}

Mat3 skew(const Vec3& v) {
  Mat3 S;
  S << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return S;
}

const char* to_string(ScaleProvenance p) {
  switch (p) {
    case ScaleProvenance::kGroundTruthBaseline: return "ground-truth-baseline";
    case ScaleProvenance::kUserSupplied: return "user-supplied";
    case ScaleProvenance::kUnit: return "unit";
  }
  return "unknown";
}

std::size_t CorrespondenceSet::inlier_count() const {
  if (!has_mask()) return pairs.size();
  std::size_t n = 0;
  for (char c : inlier_mask) n += c ? 1 : 0;
  return n;
}

CorrespondenceSet CorrespondenceSet::inliers() const {
  CorrespondenceSet out;
  if (!has_mask()) {
    out.pairs = pairs;
    return out;
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (inlier_mask[i]) out.pairs.push_back(pairs[i]);
  }
  return out;
}

}  // namespace approach
