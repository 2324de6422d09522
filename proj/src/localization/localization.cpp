#include <algorithm>
#include <cmath>

#include "approach/error.hpp"
#include "approach/localization.hpp"

namespace approach {

BoundingBox BoundingBox::make(int frame, std::string label, double u_min,
                              double v_min, double u_max, double v_max) {
  if (!(u_min < u_max) || !(v_min < v_max)) {
    throw Error(ErrorCode::kInvertedBox,
                "box (" + std::to_string(u_min) + ", " + std::to_string(v_min) +
                    ", " + std::to_string(u_max) + ", " + std::to_string(v_max) +
                    ") is empty or inverted");
  }
  BoundingBox box;
  box.rect = {u_min, v_min, u_max, v_max};
  box.label = std::move(label);
  box.frame = frame;
  return box;
}

ScaleProvenance ScaleSource::provenance() const {
  switch (kind) {
    case Kind::kGroundTruth: return ScaleProvenance::kGroundTruthBaseline;
    case Kind::kFixed: return ScaleProvenance::kUserSupplied;
    case Kind::kUnit: return ScaleProvenance::kUnit;
  }
  return ScaleProvenance::kUnit;
}

ImagePoint object_center(const FeatureSet& fs,
                         const std::optional<std::vector<int>>& indices,
                         int min_features) {
  double su = 0.0, sv = 0.0;
  std::size_t n = 0;
  auto add = [&](const Keypoint& kp) {
    su += kp.position.u;
    sv += kp.position.v;
    ++n;
  };
  if (indices) {
    for (int i : *indices) {
      if (i < 0 || static_cast<std::size_t>(i) >= fs.size()) {
        throw Error(ErrorCode::kInvalidArgument, "feature index out of range");
      }
      add(fs.keypoints[i]);
    }
  } else {
    for (const auto& kp : fs.keypoints) add(kp);
  }
  if (n == 0 || static_cast<int>(n) < min_features) {
    throw Error(ErrorCode::kTooFewObjectFeatures,
                std::to_string(n) + " object features, need " +
                    std::to_string(min_features));
  }
  return {su / static_cast<double>(n), sv / static_cast<double>(n)};
}

double median_displacement(const CorrespondenceSet& matches) {
  if (matches.pairs.empty()) return 0.0;
  std::vector<double> d;
  d.reserve(matches.size());
  for (const auto& c : matches.pairs) d.push_back(std::hypot(c.q.u - c.p.u, c.q.v - c.p.v));
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  return *mid;
}

LocalizationResult localize_from_matches(const CorrespondenceSet& full,
                                         const CorrespondenceSet& object,
                                         const BoundingBox& box,
                                         const CameraIntrinsics& K,
                                         const ScaleSource& scale,
                                         const LocalizationParams& params) {
  if (full.size() >= 8) {
    const double parallax = median_displacement(full);
    if (parallax < params.min_parallax_px) {
      throw Error(ErrorCode::kInsufficientParallax,
                  "median feature displacement " + std::to_string(parallax) +
                      " px is below " + std::to_string(params.min_parallax_px));
    }
  }
  const PoseEstimate est = estimate_relative_pose(full, K, params.ransac);

  LocalizationResult out;
  out.pose = est.pose.with_scale(scale.value(), scale.provenance());
  out.pose_inliers = est.inliers;

  const auto E = EssentialMatrix::from_pose(est.pose.R, est.pose.t);
  for (const auto& c : object.pairs) {
    if (params.epipolar_filter &&
        !(E.sampson_distance(K.normalize(c.p), K.normalize(c.q)) <
          params.ransac.threshold)) {
      continue;
    }
    out.object_pairs.pairs.push_back(c);
  }
  const auto n = static_cast<int>(out.object_pairs.size());
  if (n == 0 || n < params.min_object_features) {
    throw Error(ErrorCode::kTooFewObjectFeatures,
                std::to_string(n) + " matched object features, need " +
                    std::to_string(params.min_object_features));
  }

  double pu = 0, pv = 0, qu = 0, qv = 0;
  for (const auto& c : out.object_pairs.pairs) {
    pu += c.p.u;
    pv += c.p.v;
    qu += c.q.u;
    qv += c.q.v;
  }
  out.p = {pu / n, pv / n};
  out.q = {qu / n, qv / n};
  if (params.use_box_center) {
    const ImagePoint bc = box.center();
    out.q = {bc.u + (out.q.u - out.p.u), bc.v + (out.q.v - out.p.v)};
    out.p = bc;
  }

  // Triangulating at unit scale and scaling afterwards keeps the result
  // exactly proportional to the scale source.
  out.location.position =
      scale.value() * triangulate(out.p, out.q, K, est.pose.with_scale(1.0, ScaleProvenance::kUnit));
  out.location.frame = box.frame;
  out.location.provenance = out.pose.provenance;
  return out;
}

LocalizationResult localize_object(const GrayImage& frame1,
                                   const GrayImage& frame2,
                                   const BoundingBox& box,
                                   const CameraIntrinsics& K,
                                   const ScaleSource& scale,
                                   const LocalizationParams& params) {
  const FeatureSet fa = detect_and_describe(frame1, params.features);
  const FeatureSet fb = detect_and_describe(frame2, params.features);
  if (fa.empty() || fb.empty()) {
    throw Error(ErrorCode::kTooFewMatches, "no features detected");
  }
  const MatchResult full = match_features(fa, fb, params.matching);

  const FeatureSet fo = detect_and_describe(frame1, params.features, box.rect);
  if (fo.empty()) {
    throw Error(ErrorCode::kTooFewObjectFeatures, "no features inside the box");
  }
  const MatchResult object = match_features(fo, fb, params.matching);
  return localize_from_matches(full.correspondences, object.correspondences, box,
                               K, scale, params);
}

}  // namespace approach
