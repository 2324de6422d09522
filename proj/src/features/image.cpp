#include <algorithm>
#include <cmath>

#include "approach/error.hpp"
#include "approach/features.hpp"

namespace approach {

GrayImage::GrayImage(int w, int h, std::uint8_t fill) : width(w), height(h) {
  if (w < 0 || h < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative image size");
  }
  pixels.assign(static_cast<std::size_t>(w) * h, fill);
}

GrayImage smooth(const GrayImage& img) {
  static constexpr int kTaps[5] = {1, 4, 6, 4, 1};
  const int w = img.width, h = img.height;
  std::vector<int> tmp(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int acc = 0;
      for (int k = -2; k <= 2; ++k) {
        acc += kTaps[k + 2] * img.at(std::clamp(x + k, 0, w - 1), y);
      }
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int acc = 0;
      for (int k = -2; k <= 2; ++k) {
        acc += kTaps[k + 2] *
               tmp[static_cast<std::size_t>(std::clamp(y + k, 0, h - 1)) * w + x];
      }
      out.at(x, y) = static_cast<std::uint8_t>((acc + 128) >> 8);
    }
  }
  return out;
}

}  // namespace approach
