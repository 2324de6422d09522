#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "approach/error.hpp"
#include "approach/io.hpp"
#include "io/text.hpp"

namespace approach::io {

std::string format_fixed(double v) {
  char buf[128];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 9);
  if (res.ec != std::errc{}) return "nan";
  return std::string(buf, res.ptr);
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

std::string read_text(const fs::path& path) {
  const auto bytes = read_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

namespace detail {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::vector<std::string_view> split_char(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(sep, start);
    out.push_back(line.substr(start, end == std::string_view::npos ? end : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

double parse_double(std::string_view token, std::string_view what) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(v)) {
    throw Error(ErrorCode::kParseError,
                "bad number '" + std::string(token) + "' in " + std::string(what));
  }
  return v;
}

int parse_int(std::string_view token, std::string_view what) {
  int v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw Error(ErrorCode::kParseError,
                "bad integer '" + std::string(token) + "' in " + std::string(what));
  }
  return v;
}

}  // namespace detail

CameraIntrinsics parse_kitti_calib(std::string_view text, std::string_view camera) {
  const std::string key = std::string(camera) + ":";
  for (auto line : detail::split_lines(text)) {
    auto tokens = detail::split_ws(line);
    if (tokens.empty() || tokens.front() != key) continue;
    if (tokens.size() != 13) {
      throw Error(ErrorCode::kParseError, std::string(camera) + " line has " +
                                              std::to_string(tokens.size() - 1) +
                                              " numbers, expected 12");
    }
    std::array<double, 12> P{};
    for (int i = 0; i < 12; ++i) P[i] = detail::parse_double(tokens[i + 1], "calib");
    try {
      return CameraIntrinsics(P[0], P[5], P[2], P[6]);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParseError, e.what());
    }
  }
  throw Error(ErrorCode::kMissingCamera, "no '" + key + "' line in calibration");
}

CameraIntrinsics read_kitti_calib(const fs::path& path, std::string_view camera) {
  return parse_kitti_calib(read_text(path), camera);
}

std::string format_kitti_calib(const CameraIntrinsics& K) {
  char buf[256];
  std::string out;
  for (int cam = 0; cam < 4; ++cam) {
    std::snprintf(buf, sizeof buf,
                  "P%d: %.12e 0 %.12e 0 0 %.12e %.12e 0 0 0 1 0\n", cam, K.fu(),
                  K.cu(), K.fv(), K.cv());
    out += buf;
  }
  return out;
}

std::vector<GroundTruthPose> parse_kitti_poses(std::string_view text) {
  std::vector<GroundTruthPose> poses;
  int line_no = 0;
  for (auto line : detail::split_lines(text)) {
    ++line_no;
    if (detail::is_blank(line)) continue;
    auto tokens = detail::split_ws(line);
    if (tokens.size() != 12) {
      throw Error(ErrorCode::kParseError, "pose line " + std::to_string(line_no) +
                                              " has " + std::to_string(tokens.size()) +
                                              " numbers, expected 12");
    }
    GroundTruthPose pose;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 4; ++c) {
        const double v = detail::parse_double(tokens[r * 4 + c], "poses");
        if (c < 3) {
          pose.R(r, c) = v;
        } else {
          pose.t(r) = v;
        }
      }
    }
    if ((pose.R.transpose() * pose.R - Mat3::Identity()).norm() > 1e-6) {
      throw Error(ErrorCode::kParseError,
                  "pose line " + std::to_string(line_no) + " is not orthonormal");
    }
    poses.push_back(pose);
  }
  return poses;
}

std::vector<GroundTruthPose> read_kitti_poses(const fs::path& path) {
  return parse_kitti_poses(read_text(path));
}

std::string format_kitti_poses(const std::vector<GroundTruthPose>& poses) {
  std::string out;
  char buf[64];
  for (const auto& p : poses) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 4; ++c) {
        std::snprintf(buf, sizeof buf, "%.12e", c < 3 ? p.R(r, c) : p.t(r));
        if (r || c) out += ' ';
        out += buf;
      }
    }
    out += '\n';
  }
  return out;
}

Vec3 ground_truth_step(const GroundTruthPose& a, const GroundTruthPose& b) {
  return a.R.transpose() * (b.t - a.t);
}

Vec3 center_in(const GroundTruthPose& a, const GroundTruthPose& b) {
  return ground_truth_step(a, b);
}

RelativePose relative_ground_truth(const GroundTruthPose& a, const GroundTruthPose& b) {
  // X_b = R_b^T (R_a X_a + t_a - t_b)
  const Mat3 R = b.R.transpose() * a.R;
  const Vec3 t = b.R.transpose() * (a.t - b.t);
  return RelativePose::make(R, t, t.norm(), ScaleProvenance::kGroundTruthBaseline);
}

std::optional<int> SequenceManifest::position_of(int frame) const {
  const auto it = std::find(frame_indices.begin(), frame_indices.end(), frame);
  if (it == frame_indices.end()) return std::nullopt;
  return static_cast<int>(it - frame_indices.begin());
}

std::vector<GrayImage> SequenceManifest::load_images() const {
  std::vector<GrayImage> frames;
  frames.reserve(image_paths.size());
  for (const auto& p : image_paths) frames.push_back(read_image(p));
  return frames;
}

SequenceManifest load_sequence(const fs::path& dir, const SequenceOptions& opts) {
  if (opts.camera.size() != 2 || opts.camera[0] != 'P' || opts.camera[1] < '0' ||
      opts.camera[1] > '3') {
    throw Error(ErrorCode::kInvalidArgument, "camera must be one of P0..P3");
  }
  SequenceManifest m;
  m.K = read_kitti_calib(dir / "calib.txt", opts.camera);

  const fs::path image_dir = dir / ("image_" + std::string(1, opts.camera[1]));
  std::error_code ec;
  if (!fs::is_directory(image_dir, ec)) {
    throw Error(ErrorCode::kIoFailure, "missing image directory " + image_dir.string());
  }
  std::vector<fs::path> all;
  for (const auto& entry : fs::directory_iterator(image_dir)) {
    const auto ext = entry.path().extension().string();
    if (entry.is_regular_file() && (ext == ".png" || ext == ".pgm")) {
      all.push_back(entry.path());
    }
  }
  std::sort(all.begin(), all.end());

  for (std::size_t i = 0; i < all.size(); ++i) {
    int index = static_cast<int>(i);
    const std::string stem = all[i].stem().string();
    int parsed = 0;
    const auto res = std::from_chars(stem.data(), stem.data() + stem.size(), parsed);
    if (res.ec == std::errc{} && res.ptr == stem.data() + stem.size()) index = parsed;
    if (opts.first && index < *opts.first) continue;
    if (opts.last && index > *opts.last) continue;
    m.image_paths.push_back(all[i]);
    m.frame_indices.push_back(index);
  }
  if (m.image_paths.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "sequence " + dir.string() + " has fewer than 2 frames in range");
  }

  std::optional<fs::path> poses_path = opts.poses_path;
  if (!poses_path) {
    if (fs::exists(dir / "poses.txt", ec)) {
      poses_path = dir / "poses.txt";
    } else {
      const fs::path kitti = dir.parent_path().parent_path() / "poses" /
                             (dir.filename().string() + ".txt");
      if (fs::exists(kitti, ec)) poses_path = kitti;
    }
  }
  if (poses_path) {
    const auto all_poses = read_kitti_poses(*poses_path);
    std::vector<GroundTruthPose> selected;
    for (int idx : m.frame_indices) {
      if (idx < 0 || static_cast<std::size_t>(idx) >= all_poses.size()) {
        throw Error(ErrorCode::kParseError,
                    "pose file has no entry for frame " + std::to_string(idx));
      }
      selected.push_back(all_poses[idx]);
    }
    m.poses = std::move(selected);
  }

  std::optional<fs::path> objects_path = opts.objects_path;
  if (!objects_path && fs::exists(dir / "objects.txt", ec)) objects_path = dir / "objects.txt";
  if (objects_path) m.objects = read_object_positions(*objects_path);
  return m;
}

}  // namespace approach::io
