#pragma once

// Oriented multi-scale FAST corners with steered 256-bit binary descriptors.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "approach/geometry.hpp"
#include "approach/parallel.hpp"

namespace approach {

/// Row-major 8-bit intensity raster.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0);

  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  bool valid() const {
    return width > 0 && height > 0 &&
           pixels.size() == static_cast<std::size_t>(width) * height;
  }
  bool operator==(const GrayImage&) const = default;
};

/// Axis-aligned pixel rectangle, bounds inclusive.
struct Rect {
  double u_min = 0.0;
  double v_min = 0.0;
  double u_max = 0.0;
  double v_max = 0.0;

  bool contains(const ImagePoint& p) const {
    return p.u >= u_min && p.u <= u_max && p.v >= v_min && p.v <= v_max;
  }
};

struct Keypoint {
  ImagePoint position;        ///< level-0 pixel coordinates
  ImagePoint level_position;  ///< integer pixel on its pyramid level
  int level = 0;
  double orientation = 0.0;  ///< radians in [-pi, pi)
  double response = 0.0;

  bool operator==(const Keypoint&) const = default;
};

using Descriptor = std::array<std::uint64_t, 4>;

struct FeatureSet {
  std::vector<Keypoint> keypoints;
  std::vector<Descriptor> descriptors;

  std::size_t size() const { return keypoints.size(); }
  bool empty() const { return keypoints.empty(); }
  bool operator==(const FeatureSet&) const = default;
};

/// 256 point pairs (ax, ay, bx, by) inside the 31x31 patch.
struct SamplingPattern {
  std::array<std::array<std::int8_t, 4>, 256> pairs{};
};

inline constexpr std::uint64_t kPatternSeed = 0x5eed0f0bu;
inline constexpr int kPatchRadius = 15;
/// Patch radius plus the slack needed to rotate it about its center.
inline constexpr int kDescriptorMargin = 22;
inline constexpr int kMinDetectionSize = 32;

/// Gaussian(0, 31^2/25) pairs clipped to the patch; deterministic in seed.
SamplingPattern generate_pattern(std::uint64_t seed);
/// The committed table, equal to generate_pattern(kPatternSeed).
const SamplingPattern& default_pattern();

/// FAST-9 score: the larger of the bright-arc and dark-arc sums of
/// |I - center| - threshold, or 0 if the pixel fails the segment test.
int fast_score(const GrayImage& img, int x, int y, int threshold);

/// FAST-9 segment test over all pixels at least 3 from the border, then
/// non-maximum suppression in a (2r+1)^2 window. Ties go to the earlier
/// pixel in raster order. Returned in raster order.
std::vector<Keypoint> detect_fast(const GrayImage& img, int threshold,
                                  int nms_radius,
                                  Execution exec = Execution::kParallel);

struct DescribedKeypoint {
  double orientation = 0.0;
  Descriptor descriptor{};
};

/// Intensity-centroid orientation over the radius-15 disc and the steered
/// binary test (bit set iff I(a) < I(b)). Samples `img` at
/// kp.level_position. Throws kMarginViolation inside the margin.
DescribedKeypoint orient_and_describe(const GrayImage& img, const Keypoint& kp,
                                      const SamplingPattern& pattern,
                                      bool bilinear = false);

struct FeatureConfig {
  int levels = 4;
  double scale_factor = 1.2;
  int max_features = 1000;
  int fast_threshold = 20;
  int nms_radius = 3;
  bool bilinear = false;
  Execution execution = Execution::kParallel;
};

/// Level l holds floor(size / s^l) pixels; pixel (x, y) is the mean of the
/// base image over the s^l x s^l footprint centred on (x * s^l, y * s^l),
/// taken from a 2 ceil(s^l) square grid of bilinear samples.
std::vector<GrayImage> build_pyramid(const GrayImage& img, int levels,
                                     double scale_factor,
                                     Execution exec = Execution::kParallel);

/// Separable [1 4 6 4 1] binomial blur, replicated border.
GrayImage smooth(const GrayImage& img);

FeatureSet detect_and_describe(const GrayImage& img, const FeatureConfig& cfg,
                               const std::optional<Rect>& mask = std::nullopt);

}  // namespace approach
