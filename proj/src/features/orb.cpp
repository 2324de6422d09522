#include <cmath>
#include <numbers>

#include "approach/error.hpp"
#include "approach/features.hpp"

namespace approach {
namespace {

double bilinear_at(const GrayImage& img, double x, double y) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0, fy = y - y0;
  const double a = img.at(x0, y0), b = img.at(x0 + 1, y0);
  const double c = img.at(x0, y0 + 1), d = img.at(x0 + 1, y0 + 1);
  return (a * (1 - fx) + b * fx) * (1 - fy) + (c * (1 - fx) + d * fx) * fy;
}

}  // namespace

DescribedKeypoint orient_and_describe(const GrayImage& img, const Keypoint& kp,
                                      const SamplingPattern& pattern,
                                      bool bilinear) {
  const int cx = static_cast<int>(std::lround(kp.level_position.u));
  const int cy = static_cast<int>(std::lround(kp.level_position.v));
  if (cx < kDescriptorMargin || cy < kDescriptorMargin ||
      cx >= img.width - kDescriptorMargin || cy >= img.height - kDescriptorMargin) {
    throw Error(ErrorCode::kMarginViolation,
                "keypoint at (" + std::to_string(cx) + ", " + std::to_string(cy) +
                    ") is inside the descriptor margin");
  }

  long long m10 = 0, m01 = 0;
  for (int dy = -kPatchRadius; dy <= kPatchRadius; ++dy) {
    for (int dx = -kPatchRadius; dx <= kPatchRadius; ++dx) {
      if (dx * dx + dy * dy > kPatchRadius * kPatchRadius) continue;
      const int v = img.at(cx + dx, cy + dy);
      m10 += static_cast<long long>(dx) * v;
      m01 += static_cast<long long>(dy) * v;
    }
  }
  DescribedKeypoint out;
  if (m10 != 0 || m01 != 0) {
    out.orientation = std::atan2(static_cast<double>(m01), static_cast<double>(m10));
    if (out.orientation >= std::numbers::pi) out.orientation -= 2.0 * std::numbers::pi;
  }

  const double c = std::cos(out.orientation), s = std::sin(out.orientation);
  for (std::size_t i = 0; i < pattern.pairs.size(); ++i) {
    const auto& pr = pattern.pairs[i];
    const double ax = pr[0] * c - pr[1] * s, ay = pr[0] * s + pr[1] * c;
    const double bx = pr[2] * c - pr[3] * s, by = pr[2] * s + pr[3] * c;
    bool bit;
    if (bilinear) {
      bit = bilinear_at(img, cx + ax, cy + ay) < bilinear_at(img, cx + bx, cy + by);
    } else {
      const int ia = img.at(cx + static_cast<int>(std::lround(ax)),
                            cy + static_cast<int>(std::lround(ay)));
      const int ib = img.at(cx + static_cast<int>(std::lround(bx)),
                            cy + static_cast<int>(std::lround(by)));
      bit = ia < ib;
    }
    if (bit) out.descriptor[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return out;
}

}  // namespace approach
