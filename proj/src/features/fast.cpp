#include <algorithm>
#include <array>

#include "approach/features.hpp"

namespace approach {
namespace {

constexpr std::array<std::array<int, 2>, 16> kCircle = {{{0, -3},
                                                         {1, -3},
                                                         {2, -2},
                                                         {3, -1},
                                                         {3, 0},
                                                         {3, 1},
                                                         {2, 2},
                                                         {1, 3},
                                                         {0, 3},
                                                         {-1, 3},
                                                         {-2, 2},
                                                         {-3, 1},
                                                         {-3, 0},
                                                         {-3, -1},
                                                         {-2, -2},
                                                         {-1, -3}}};
constexpr int kArc = 9;

bool has_arc(std::uint32_t bits) {
  // Doubling the 16-bit ring turns circular runs into linear ones.
  const std::uint32_t ring = bits | (bits << 16);
  std::uint32_t run = ring;
  for (int k = 1; k < kArc; ++k) run &= ring >> k;
  return run != 0;
}

void score_row(const GrayImage& img, int y, int threshold, int* out) {
  for (int x = 3; x < img.width - 3; ++x) out[x] = fast_score(img, x, y, threshold);
}

}  // namespace

int fast_score(const GrayImage& img, int x, int y, int threshold) {
  const int c = img.at(x, y);
  const int hi = c + threshold;
  const int lo = c - threshold;
  // Any 9-arc covers two of the four compass pixels.
  int compass_bright = 0, compass_dark = 0;
  for (int k = 0; k < 16; k += 4) {
    const int v = img.at(x + kCircle[k][0], y + kCircle[k][1]);
    compass_bright += v > hi;
    compass_dark += v < lo;
  }
  if (compass_bright < 2 && compass_dark < 2) return 0;

  std::uint32_t bright = 0, dark = 0;
  int bright_sum = 0, dark_sum = 0;
  for (int k = 0; k < 16; ++k) {
    const int v = img.at(x + kCircle[k][0], y + kCircle[k][1]);
    if (v > hi) {
      bright |= 1u << k;
      bright_sum += v - hi;
    } else if (v < lo) {
      dark |= 1u << k;
      dark_sum += lo - v;
    }
  }
  int score = 0;
  if (has_arc(bright)) score = std::max(score, bright_sum);
  if (has_arc(dark)) score = std::max(score, dark_sum);
  return score;
}

std::vector<Keypoint> detect_fast(const GrayImage& img, int threshold,
                                  int nms_radius, Execution exec) {
  std::vector<Keypoint> out;
  const int w = img.width, h = img.height;
  if (w < 7 || h < 7) return out;
  std::vector<int> score(static_cast<std::size_t>(w) * h, 0);
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (int y = 3; y < h - 3; ++y) {
      score_row(img, y, threshold, &score[static_cast<std::size_t>(y) * w]);
    }
  } else {
    for (int y = 3; y < h - 3; ++y) {
      score_row(img, y, threshold, &score[static_cast<std::size_t>(y) * w]);
    }
  }

  const int r = std::max(0, nms_radius);
  auto keep_row = [&](int y, std::vector<Keypoint>& row) {
    for (int x = 3; x < w - 3; ++x) {
      const int s = score[static_cast<std::size_t>(y) * w + x];
      if (s <= 0) continue;
      bool is_max = true;
      for (int dy = -r; dy <= r && is_max; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= h) continue;
        for (int dx = -r; dx <= r; ++dx) {
          const int xx = x + dx;
          if (xx < 0 || xx >= w || (dx == 0 && dy == 0)) continue;
          const int o = score[static_cast<std::size_t>(yy) * w + xx];
          const bool earlier = dy < 0 || (dy == 0 && dx < 0);
          if (o > s || (o == s && earlier)) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) {
        Keypoint kp;
        kp.position = {static_cast<double>(x), static_cast<double>(y)};
        kp.level_position = kp.position;
        kp.response = s;
        row.push_back(kp);
      }
    }
  };

  std::vector<std::vector<Keypoint>> rows(h);
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (int y = 3; y < h - 3; ++y) keep_row(y, rows[y]);
  } else {
    for (int y = 3; y < h - 3; ++y) keep_row(y, rows[y]);
  }
  for (auto& row : rows) out.insert(out.end(), row.begin(), row.end());
  return out;
}

}  // namespace approach
