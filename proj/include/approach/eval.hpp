#pragma once

// Ground-plane trajectory and object-localization errors, aggregated per
// video as MAE/RMSE tables.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "approach/geometry.hpp"
#include "approach/localization.hpp"

namespace approach::eval {

struct ErrorReport {
  std::vector<std::string> labels;
  std::vector<double> errors;  ///< meters
  double mae = 0.0;
  double rmse = 0.0;

  std::size_t size() const { return errors.size(); }
};

/// MAE and RMSE of non-negative errors. Throws kLengthMismatch when the label
/// count differs from the error count and kInvalidArgument on a negative or
/// non-finite error.
ErrorReport summarize(std::vector<double> errors, std::vector<std::string> labels = {});

/// (X, Z) distance between two points.
double ground_plane_distance(const Vec3& a, const Vec3& b);

/// Per-step (X, Z) distance between estimated and true steps; labels default
/// to the step index. Throws kLengthMismatch.
ErrorReport trajectory_errors(std::span<const Vec3> est_steps, std::span<const Vec3> gt_steps,
                              std::vector<std::string> labels = {});

double localization_error(const ObjectLocation& est, const Vec3& gt);

/// Differences of consecutive positions, starting from the origin.
std::vector<Vec3> steps_from_positions(std::span<const Vec3> positions);

struct VideoResult {
  std::string name;
  ErrorReport trajectory;
  std::optional<ErrorReport> localization;
};

/// Shown on the first line of every table: estimated unit steps are scaled
/// by the ground-truth step length before comparison.
inline constexpr std::string_view kScaleNote =
    "# scale: each estimated step uses the ground-truth baseline length";

/// "video,mae,rmse" rows plus a mean row.
std::string format_trajectory_table(const std::vector<VideoResult>& videos);
/// "video,mae" rows (videos with a localization report) plus a mean row.
std::string format_localization_table(const std::vector<VideoResult>& videos);

}  // namespace approach::eval
