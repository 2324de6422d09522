#include <cmath>

#include "approach/error.hpp"
#include "approach/eval.hpp"
#include "approach/io.hpp"

namespace approach::eval {

ErrorReport summarize(std::vector<double> errors, std::vector<std::string> labels) {
  if (labels.empty()) {
    for (std::size_t i = 0; i < errors.size(); ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != errors.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(labels.size()) + " labels for " +
                                                std::to_string(errors.size()) + " errors");
  }
  ErrorReport r;
  double sum = 0.0, sum_sq = 0.0;
  for (double e : errors) {
    if (!(e >= 0.0) || !std::isfinite(e)) {
      throw Error(ErrorCode::kInvalidArgument, "errors must be finite and non-negative");
    }
    sum += e;
    sum_sq += e * e;
  }
  if (!errors.empty()) {
    const double n = static_cast<double>(errors.size());
    r.mae = sum / n;
    r.rmse = std::sqrt(sum_sq / n);
    // Rounding can put sqrt(mean(e^2)) a hair below mean(e) for equal errors.
    if (r.rmse < r.mae) r.rmse = r.mae;
  }
  r.errors = std::move(errors);
  r.labels = std::move(labels);
  return r;
}

double ground_plane_distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a.x() - b.x(), a.z() - b.z());
}

ErrorReport trajectory_errors(std::span<const Vec3> est_steps, std::span<const Vec3> gt_steps,
                              std::vector<std::string> labels) {
  if (est_steps.size() != gt_steps.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(est_steps.size()) + " estimated steps vs " +
                    std::to_string(gt_steps.size()) + " ground-truth steps");
  }
  std::vector<double> errors;
  errors.reserve(est_steps.size());
  for (std::size_t i = 0; i < est_steps.size(); ++i) {
    errors.push_back(ground_plane_distance(est_steps[i], gt_steps[i]));
  }
  return summarize(std::move(errors), std::move(labels));
}

double localization_error(const ObjectLocation& est, const Vec3& gt) {
  return ground_plane_distance(est.position, gt);
}

std::vector<Vec3> steps_from_positions(std::span<const Vec3> positions) {
  std::vector<Vec3> steps;
  Vec3 prev = Vec3::Zero();
  for (const auto& p : positions) {
    steps.push_back(p - prev);
    prev = p;
  }
  return steps;
}

namespace {

std::string table(const std::vector<VideoResult>& videos, bool localization) {
  std::string out(kScaleNote);
  out += localization ? "\nvideo,mae\n" : "\nvideo,mae,rmse\n";
  double mae = 0.0, rmse = 0.0;
  int n = 0;
  for (const auto& v : videos) {
    const ErrorReport* r = localization ? (v.localization ? &*v.localization : nullptr)
                                        : &v.trajectory;
    if (!r) continue;
    out += v.name + "," + io::format_fixed(r->mae);
    if (!localization) out += "," + io::format_fixed(r->rmse);
    out += '\n';
    mae += r->mae;
    rmse += r->rmse;
    ++n;
  }
  if (n > 0) {
    out += "mean," + io::format_fixed(mae / n);
    if (!localization) out += "," + io::format_fixed(rmse / n);
    out += '\n';
  }
  return out;
}

}  // namespace

std::string format_trajectory_table(const std::vector<VideoResult>& videos) {
  return table(videos, false);
}

std::string format_localization_table(const std::vector<VideoResult>& videos) {
  return table(videos, true);
}

}  // namespace approach::eval
