#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "approach/io.hpp"

namespace approach::io {
namespace {

using Color = std::array<std::uint8_t, 3>;

constexpr Color kFeature{0, 255, 0};
constexpr Color kMatch{255, 255, 0};
constexpr int kBannerRows = 12;
constexpr int kCrossArm = 6;

void put(RgbImage& img, int x, int y, const Color& c) { img.set(x, y, c[0], c[1], c[2]); }

void line(RgbImage& img, int x0, int y0, int x1, int y1, const Color& c) {
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    put(img, x0, y0, c);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

bool finite_pixel(const ImagePoint& p) {
  return std::isfinite(p.u) && std::isfinite(p.v) && std::abs(p.u) < 1e6 &&
         std::abs(p.v) < 1e6;
}

Color banner_color(const NavRecord& rec) {
  if (rec.skipped) return {128, 128, 128};
  switch (rec.advice.kind) {
    case AdviceKind::kOnCourse: return {0, 160, 0};
    case AdviceKind::kVeerLeft:
    case AdviceKind::kVeerRight: return {220, 0, 0};
    case AdviceKind::kArrived: return {0, 0, 220};
  }
  return {128, 128, 128};
}

}  // namespace

RgbImage render_overlay(const GrayImage& frame, const NavRecord& rec,
                        const CameraIntrinsics& K, OverlayMarker* marker) {
  RgbImage img(frame);
  for (const auto& c : rec.inliers.pairs) {
    if (!finite_pixel(c.p) || !finite_pixel(c.q)) continue;
    line(img, static_cast<int>(std::lround(c.p.u)), static_cast<int>(std::lround(c.p.v)),
         static_cast<int>(std::lround(c.q.u)), static_cast<int>(std::lround(c.q.v)), kMatch);
  }
  for (const auto& c : rec.inliers.pairs) {
    if (!finite_pixel(c.q)) continue;
    const int x = static_cast<int>(std::lround(c.q.u));
    const int y = static_cast<int>(std::lround(c.q.v));
    for (int d = -1; d <= 1; ++d) {
      put(img, x + d, y, kFeature);
      put(img, x, y + d, kFeature);
    }
  }

  // Banner width encodes |angle| / 180 so the severity is visible at a glance.
  const Color bc = banner_color(rec);
  const double frac = rec.angle_deg ? std::min(1.0, std::abs(*rec.angle_deg) / 180.0) : 1.0;
  const int banner_w = std::max(1, static_cast<int>(std::lround(frac * img.width)));
  for (int y = 0; y < std::min(kBannerRows, img.height); ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (x < banner_w) {
        put(img, x, y, bc);
      } else {
        put(img, x, y, {32, 32, 32});
      }
    }
  }

  OverlayMarker m;
  m.frame = rec.frame;
  const Vec3& o = rec.object.position;
  if (o.z() > 0.0) {
    const ImagePoint p = K.project(o);
    if (finite_pixel(p)) {
      m.u = static_cast<int>(std::lround(p.u));
      m.v = static_cast<int>(std::lround(p.v));
      if (m.u >= 0 && m.v >= 0 && m.u < img.width && m.v < img.height) {
        m.drawn = true;
        for (int d = -kCrossArm; d <= kCrossArm; ++d) {
          put(img, m.u + d, m.v, kObjectMarkerColor);
          put(img, m.u, m.v + d, kObjectMarkerColor);
        }
      }
    }
  }
  if (marker) *marker = m;
  return img;
}

}  // namespace approach::io
