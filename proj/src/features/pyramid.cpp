#include <algorithm>
#include <cmath>

#include "approach/error.hpp"
#include "approach/features.hpp"

namespace approach {
namespace {

double bilinear(const GrayImage& src, double sx, double sy) {
  sx = std::clamp(sx, 0.0, src.width - 1.0);
  sy = std::clamp(sy, 0.0, src.height - 1.0);
  const int x0 = static_cast<int>(sx), y0 = static_cast<int>(sy);
  const int x1 = std::min(x0 + 1, src.width - 1), y1 = std::min(y0 + 1, src.height - 1);
  const double fx = sx - x0, fy = sy - y0;
  const double top = src.at(x0, y0) * (1.0 - fx) + src.at(x1, y0) * fx;
  const double bot = src.at(x0, y1) * (1.0 - fx) + src.at(x1, y1) * fx;
  return top * (1.0 - fy) + bot * fy;
}

// Mean of an n x n grid of bilinear samples over the s x s footprint centred
// on (x s, y s).
void resample_row(const GrayImage& src, double scale, int y, GrayImage& dst) {
  const int n = 2 * static_cast<int>(std::ceil(scale));
  for (int x = 0; x < dst.width; ++x) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const double sy = y * scale + ((j + 0.5) / n - 0.5) * scale;
      for (int i = 0; i < n; ++i) {
        acc += bilinear(src, x * scale + ((i + 0.5) / n - 0.5) * scale, sy);
      }
    }
    dst.at(x, y) = static_cast<std::uint8_t>(std::lround(acc / (n * n)));
  }
}

// Vertex of the parabola through three FAST scores, clamped to half a pixel.
double parabola_offset(int left, int centre, int right) {
  const double denom = left - 2.0 * centre + right;
  if (denom >= 0.0) return 0.0;
  return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

ImagePoint refine(const GrayImage& lvl, const Keypoint& kp, int threshold) {
  const int x = static_cast<int>(kp.level_position.u);
  const int y = static_cast<int>(kp.level_position.v);
  const int c = fast_score(lvl, x, y, threshold);
  const double du = parabola_offset(fast_score(lvl, x - 1, y, threshold), c,
                                    fast_score(lvl, x + 1, y, threshold));
  const double dv = parabola_offset(fast_score(lvl, x, y - 1, threshold), c,
                                    fast_score(lvl, x, y + 1, threshold));
  return {x + du, y + dv};
}

bool response_order(const Keypoint& a, const Keypoint& b) {
  if (a.response != b.response) return a.response > b.response;
  if (a.position.u != b.position.u) return a.position.u < b.position.u;
  return a.position.v < b.position.v;
}

}  // namespace

std::vector<GrayImage> build_pyramid(const GrayImage& img, int levels,
                                     double scale_factor, Execution exec) {
  std::vector<GrayImage> pyramid;
  pyramid.push_back(img);
  for (int l = 1; l < levels; ++l) {
    const double scale = std::pow(scale_factor, l);
    const int w = static_cast<int>(std::floor(img.width / scale));
    const int h = static_cast<int>(std::floor(img.height / scale));
    if (w < 1 || h < 1) break;
    GrayImage level(w, h);
    if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
      for (int y = 0; y < h; ++y) resample_row(img, scale, y, level);
    } else {
      for (int y = 0; y < h; ++y) resample_row(img, scale, y, level);
    }
    pyramid.push_back(std::move(level));
  }
  return pyramid;
}

FeatureSet detect_and_describe(const GrayImage& img, const FeatureConfig& cfg,
                               const std::optional<Rect>& mask) {
  if (cfg.levels < 1 || !(cfg.scale_factor > 1.0) || cfg.max_features < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "need levels >= 1, scale_factor > 1, max_features >= 0");
  }
  if (!img.valid() || img.width < kMinDetectionSize ||
      img.height < kMinDetectionSize) {
    throw Error(ErrorCode::kImageTooSmall,
                "image is " + std::to_string(img.width) + "x" +
                    std::to_string(img.height) + ", need at least 32x32");
  }

  const auto pyramid = build_pyramid(img, cfg.levels, cfg.scale_factor, cfg.execution);
  const int n_levels = static_cast<int>(pyramid.size());

  double total_area = 0.0;
  for (const auto& lvl : pyramid) total_area += static_cast<double>(lvl.width) * lvl.height;
  std::vector<int> quota(n_levels);
  int assigned = 0;
  for (int l = 0; l < n_levels; ++l) {
    const double area = static_cast<double>(pyramid[l].width) * pyramid[l].height;
    quota[l] = static_cast<int>(std::floor(cfg.max_features * area / total_area));
    assigned += quota[l];
  }
  quota[0] += cfg.max_features - assigned;

  FeatureSet out;
  int carry = 0;
  for (int l = 0; l < n_levels; ++l) {
    const GrayImage& lvl = pyramid[l];
    const double scale = std::pow(cfg.scale_factor, l);
    auto corners = detect_fast(lvl, cfg.fast_threshold, cfg.nms_radius, cfg.execution);
    std::vector<Keypoint> kept;
    for (auto& kp : corners) {
      const int x = static_cast<int>(kp.level_position.u);
      const int y = static_cast<int>(kp.level_position.v);
      if (x < kDescriptorMargin || y < kDescriptorMargin ||
          x >= lvl.width - kDescriptorMargin || y >= lvl.height - kDescriptorMargin) {
        continue;
      }
      kp.level = l;
      const ImagePoint sub = refine(lvl, kp, cfg.fast_threshold);
      kp.position = {sub.u * scale, sub.v * scale};
      if (mask && !mask->contains(kp.position)) continue;
      kept.push_back(kp);
    }
    std::sort(kept.begin(), kept.end(), response_order);
    const int budget = quota[l] + carry;
    if (static_cast<int>(kept.size()) > budget) kept.resize(budget);
    carry = budget - static_cast<int>(kept.size());

    if (kept.empty()) continue;
    const GrayImage blurred = smooth(lvl);
    std::vector<DescribedKeypoint> described(kept.size());
    const int n = static_cast<int>(kept.size());
    if (cfg.execution == Execution::kParallel) {
#pragma omp parallel for schedule(static)
      for (int i = 0; i < n; ++i) {
        described[i] = orient_and_describe(blurred, kept[i], default_pattern(), cfg.bilinear);
      }
    } else {
      for (int i = 0; i < n; ++i) {
        described[i] = orient_and_describe(blurred, kept[i], default_pattern(), cfg.bilinear);
      }
    }
    for (int i = 0; i < n; ++i) {
      kept[i].orientation = described[i].orientation;
      out.keypoints.push_back(kept[i]);
      out.descriptors.push_back(described[i].descriptor);
    }
  }
  return out;
}

}  // namespace approach
