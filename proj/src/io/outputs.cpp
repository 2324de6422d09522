#include <cstdio>

#include "approach/error.hpp"
#include "approach/io.hpp"
#include "io/text.hpp"

namespace approach::io {
namespace {

std::string advice_label(const NavRecord& r) {
  if (r.skipped) return "skipped";
  if (r.advice.kind == AdviceKind::kArrived) return "arrived";
  if (!r.angle_deg) return "no_heading";
  return to_string(r.advice.kind);
}

void check_header(const std::vector<std::string_view>& lines, std::string_view header) {
  if (lines.empty() || lines.front() != header) {
    throw Error(ErrorCode::kParseError, "missing CSV header '" + std::string(header) + "'");
  }
}

std::string row_ctx(int line_no) { return "CSV line " + std::to_string(line_no); }

}  // namespace

std::string format_trajectory_csv(const NavLog& log) {
  std::string out(kTrajectoryHeader);
  out += '\n';
  for (const auto& r : log.records) {
    out += std::to_string(r.frame);
    for (int i = 0; i < 3; ++i) out += "," + format_fixed(r.camera_position(i));
    for (int i = 0; i < 3; ++i) {
      out += ',';
      if (r.gt_position) out += format_fixed((*r.gt_position)(i));
    }
    out += '\n';
  }
  return out;
}

std::string format_advice_csv(const NavLog& log) {
  std::string out(kAdviceHeader);
  out += '\n';
  for (const auto& r : log.records) {
    out += std::to_string(r.frame) + ",";
    if (r.angle_deg && !r.skipped) out += format_fixed(*r.angle_deg);
    out += "," + advice_label(r) + "\n";
  }
  return out;
}

std::string format_object_csv(const NavLog& log) {
  std::string out(kObjectHeader);
  out += '\n';
  auto row = [&](int frame, const Vec3& p) {
    out += std::to_string(frame);
    for (int i = 0; i < 3; ++i) out += "," + format_fixed(p(i));
    out += '\n';
  };
  if (!log.records.empty()) row(log.start_frame, log.initial_object.position);
  for (const auto& r : log.records) row(r.frame, r.object.position);
  return out;
}

std::vector<TrajectoryRow> parse_trajectory_csv(std::string_view text) {
  auto lines = detail::split_lines(text);
  check_header(lines, kTrajectoryHeader);
  std::vector<TrajectoryRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (detail::is_blank(lines[i])) continue;
    const auto f = detail::split_char(lines[i], ',');
    const std::string ctx = row_ctx(static_cast<int>(i) + 1);
    if (f.size() != 7) throw Error(ErrorCode::kParseError, ctx + ": expected 7 fields");
    TrajectoryRow row;
    row.frame = detail::parse_int(f[0], ctx);
    for (int k = 0; k < 3; ++k) row.estimate(k) = detail::parse_double(f[1 + k], ctx);
    const int empty = (f[4].empty() ? 1 : 0) + (f[5].empty() ? 1 : 0) + (f[6].empty() ? 1 : 0);
    if (empty == 0) {
      Vec3 gt;
      for (int k = 0; k < 3; ++k) gt(k) = detail::parse_double(f[4 + k], ctx);
      row.ground_truth = gt;
    } else if (empty != 3) {
      throw Error(ErrorCode::kParseError, ctx + ": partial ground truth");
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<AdviceRow> parse_advice_csv(std::string_view text) {
  auto lines = detail::split_lines(text);
  check_header(lines, kAdviceHeader);
  std::vector<AdviceRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (detail::is_blank(lines[i])) continue;
    const auto f = detail::split_char(lines[i], ',');
    const std::string ctx = row_ctx(static_cast<int>(i) + 1);
    if (f.size() != 3) throw Error(ErrorCode::kParseError, ctx + ": expected 3 fields");
    AdviceRow row;
    row.frame = detail::parse_int(f[0], ctx);
    if (!f[1].empty()) row.angle_deg = detail::parse_double(f[1], ctx);
    row.advice = std::string(f[2]);
    rows.push_back(row);
  }
  return rows;
}

std::vector<ObjectRow> parse_object_csv(std::string_view text) {
  auto lines = detail::split_lines(text);
  check_header(lines, kObjectHeader);
  std::vector<ObjectRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (detail::is_blank(lines[i])) continue;
    const auto f = detail::split_char(lines[i], ',');
    const std::string ctx = row_ctx(static_cast<int>(i) + 1);
    if (f.size() != 4) throw Error(ErrorCode::kParseError, ctx + ": expected 4 fields");
    ObjectRow row;
    row.frame = detail::parse_int(f[0], ctx);
    for (int k = 0; k < 3; ++k) row.position(k) = detail::parse_double(f[1 + k], ctx);
    rows.push_back(row);
  }
  return rows;
}

OutputSummary write_outputs(const NavLog& log, const fs::path& dir,
                            const OverlayOptions& overlays) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIoFailure, "cannot create output directory " + dir.string());
  }
  OutputSummary summary;
  summary.trajectory_csv = dir / "trajectory.csv";
  summary.advice_csv = dir / "advice.csv";
  write_text(summary.trajectory_csv, format_trajectory_csv(log));
  summary.object_csv = dir / "object.csv";
  write_text(summary.advice_csv, format_advice_csv(log));
  write_text(summary.object_csv, format_object_csv(log));

  if (overlays.enabled) {
    if (!overlays.frames || !overlays.K) {
      throw Error(ErrorCode::kInvalidArgument, "overlays need frames and intrinsics");
    }
    for (const auto& rec : log.records) {
      const long idx = static_cast<long>(rec.frame) - overlays.first_frame;
      if (idx < 0 || idx >= static_cast<long>(overlays.frames->size())) continue;
      OverlayMarker marker;
      const RgbImage img = render_overlay((*overlays.frames)[idx], rec, *overlays.K, &marker);
      char name[32];
      std::snprintf(name, sizeof name, "overlay_%06d.ppm", rec.frame);
      write_ppm(dir / name, img);
      summary.overlays.push_back(dir / name);
      summary.markers.push_back(marker);
    }
  }
  return summary;
}

}  // namespace approach::io
