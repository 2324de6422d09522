#include <cstdio>
#include <cmath>
#include <numbers>

#include "approach/error.hpp"
#include "approach/navigation.hpp"

namespace approach {

const char* to_string(AdviceKind kind) {
  switch (kind) {
    case AdviceKind::kOnCourse: return "on_course";
    case AdviceKind::kVeerLeft: return "veer_left";
    case AdviceKind::kVeerRight: return "veer_right";
    case AdviceKind::kArrived: return "arrived";
  }
  return "unknown";
}

const char* to_string(UpdateMode mode) {
  return mode == UpdateMode::kTranslationOnly ? "paper" : "rigid";
}

void NavConfig::validate() const {
  if (!(angle_threshold_deg > 0.0 && angle_threshold_deg < 180.0)) {
    throw Error(ErrorCode::kInvalidArgument, "angle threshold must be in (0, 180)");
  }
  if (frame_interval < 1) {
    throw Error(ErrorCode::kInvalidArgument, "frame interval must be >= 1");
  }
  if (!(arrival_radius_m >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "arrival radius must be >= 0");
  }
  if (scale == ScaleSource::Kind::kFixed && !(fixed_step_m > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "fixed step length must be positive");
  }
}

ObjectLocation update_object(const ObjectLocation& o, const RelativePose& pose,
                             UpdateMode mode) {
  ObjectLocation out = o;
  if (mode == UpdateMode::kTranslationOnly) {
    out.position = o.position - pose.motion();
  } else {
    out.position = pose.transform(o.position);
  }
  out.provenance = pose.provenance;
  return out;
}

double ground_distance(const Vec3& p) { return std::hypot(p.x(), p.z()); }

double path_angle(const Vec3& object, const Vec3& heading, double arrival_radius) {
  const double dist = ground_distance(object);
  if (dist <= arrival_radius || dist == 0.0) {
    throw Error(ErrorCode::kArrived, "object is within the arrival radius");
  }
  if (std::hypot(heading.x(), heading.z()) <= 1e-6) {
    throw Error(ErrorCode::kNoHorizontalMotion, "motion has no ground-plane component");
  }
  // Rotating +Z onto +X is a turn to the right with Y pointing down.
  const double cross = heading.z() * object.x() - heading.x() * object.z();
  const double dot = heading.x() * object.x() + heading.z() * object.z();
  return std::atan2(cross, dot) * 180.0 / std::numbers::pi;
}

double path_angle(const ObjectLocation& o, const RelativePose& motion,
                  double arrival_radius) {
  return path_angle(o.position, motion.motion(), arrival_radius);
}

Advice advise(double angle_deg, const NavConfig& cfg) {
  Advice a;
  a.angle_deg = angle_deg;
  if (std::abs(angle_deg) <= cfg.angle_threshold_deg) {
    a.kind = AdviceKind::kOnCourse;
    a.message = "On course";
    return a;
  }
  const long rounded = std::lround(std::abs(angle_deg));
  a.kind = angle_deg < 0.0 ? AdviceKind::kVeerLeft : AdviceKind::kVeerRight;
  a.message = std::string("Please head towards your ") +
              (angle_deg < 0.0 ? "left" : "right") + " by about " +
              std::to_string(rounded) + " degrees";
  return a;
}

Advice arrived_advice(double distance_m) {
  Advice a;
  a.kind = AdviceKind::kArrived;
  char buf[64];
  std::snprintf(buf, sizeof buf, "You have arrived (%.2f m)", distance_m);
  a.message = buf;
  return a;
}

std::size_t NavLog::skipped_count() const {
  std::size_t n = 0;
  for (const auto& r : records) n += r.skipped ? 1 : 0;
  return n;
}

NavigationSession::NavigationSession(CameraIntrinsics K, NavConfig cfg,
                                     BaselineFn baseline)
    : K_(K), cfg_(std::move(cfg)), baseline_(std::move(baseline)) {
  cfg_.validate();
  if (cfg_.scale == ScaleSource::Kind::kGroundTruth && !baseline_) {
    throw Error(ErrorCode::kInvalidArgument,
                "ground-truth scale needs a baseline source");
  }
}

ScaleSource NavigationSession::scale_for(int reference, int current) const {
  switch (cfg_.scale) {
    case ScaleSource::Kind::kGroundTruth:
      return ScaleSource::ground_truth(baseline_(reference, current));
    case ScaleSource::Kind::kFixed: return ScaleSource::fixed(cfg_.fixed_step_m);
    case ScaleSource::Kind::kUnit: return ScaleSource::unit();
  }
  return ScaleSource::unit();
}

NavRecord& NavigationSession::record_motion(int frame, const RelativePose& pose,
                                            CorrespondenceSet inliers) {
  NavRecord rec;
  rec.frame = frame;
  rec.reference_frame = reference_frame_;
  rec.pose = pose;
  rec.inliers = std::move(inliers);

  object_ = update_object(object_, pose, cfg_.update_mode);
  object_.frame = frame;
  R_total_ = pose.R * R_total_;
  t_total_ = pose.R * t_total_ + pose.scaled_translation();
  rec.object = object_;
  rec.camera_position = -R_total_.transpose() * t_total_;

  const double dist = ground_distance(object_.position);
  if (dist < cfg_.arrival_radius_m) {
    rec.advice = arrived_advice(dist);
    log_.arrived = true;
  } else {
    try {
      const double angle = path_angle(object_, pose, cfg_.arrival_radius_m);
      rec.angle_deg = angle;
      rec.advice = advise(angle, cfg_);
    } catch (const Error& e) {
      rec.error = e.what();
      rec.advice.message = "No heading";
    }
  }
  reference_frame_ = frame;
  log_.records.push_back(std::move(rec));
  return log_.records.back();
}

const NavRecord& NavigationSession::initialize(int frame0, int frame1,
                                               const LocalizationResult& init) {
  log_ = NavLog{};
  log_.start_frame = frame0;
  log_.initial_object = init.location;
  object_ = init.location;
  R_total_ = Mat3::Identity();
  t_total_ = Vec3::Zero();
  reference_frame_ = frame0;
  initialized_ = true;
  return record_motion(frame1, init.pose, init.pose_inliers);
}

const NavRecord& NavigationSession::step(int frame,
                                         const CorrespondenceSet& matches) {
  if (!initialized_) {
    throw Error(ErrorCode::kInvalidArgument, "session is not initialized");
  }
  try {
    const PoseEstimate est =
        estimate_relative_pose(matches, K_, cfg_.pipeline.ransac);
    const ScaleSource s = scale_for(reference_frame_, frame);
    return record_motion(frame, est.pose.with_scale(s.value(), s.provenance()),
                         est.inliers);
  } catch (const Error& e) {
    NavRecord rec;
    rec.frame = frame;
    rec.reference_frame = reference_frame_;
    rec.skipped = true;
    rec.error = e.what();
    rec.object = object_;
    rec.camera_position = -R_total_.transpose() * t_total_;
    rec.advice.message = "Skipped";
    if (!log_.records.empty()) {
      rec.pose = log_.records.back().pose;
      rec.advice = log_.records.back().advice;
      rec.angle_deg = log_.records.back().angle_deg;
    }
    log_.records.push_back(std::move(rec));
    return log_.records.back();
  }
}

NavLog run_navigation(const std::vector<GrayImage>& frames, const BoundingBox& box,
                      const CameraIntrinsics& K, const NavConfig& cfg,
                      BaselineFn baseline, int first_frame) {
  if (frames.size() < 3) {
    throw Error(ErrorCode::kInvalidArgument, "navigation needs at least 3 frames");
  }
  NavigationSession session(K, cfg, baseline);
  const auto& params = cfg.pipeline;

  LocalizationResult init;
  try {
    const ScaleSource s = session.scale_for(first_frame, first_frame + 1);
    init = localize_object(frames[0], frames[1], box, K, s, params);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInitializationFailed, e.what());
  }
  session.initialize(first_frame, first_frame + 1, init);

  FeatureSet reference = detect_and_describe(frames[1], params.features);
  for (std::size_t i = 1 + cfg.frame_interval; i < frames.size() && !session.arrived();
       i += cfg.frame_interval) {
    const int frame = first_frame + static_cast<int>(i);
    FeatureSet current = detect_and_describe(frames[i], params.features);
    CorrespondenceSet matches;
    if (!reference.empty() && !current.empty()) {
      matches = match_features(reference, current, params.matching).correspondences;
    }
    const NavRecord& rec = session.step(frame, matches);
    if (!rec.skipped) reference = std::move(current);
  }
  return session.take_log();
}

}  // namespace approach
