#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "approach/features.hpp"

namespace approach {
namespace {

// Box-Muller over raw 53-bit draws, so the table does not depend on the
// standard library's distribution implementation.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  double next(double sigma) {
    if (has_spare_) {
      has_spare_ = false;
      return spare_ * sigma;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return mag * std::cos(2.0 * std::numbers::pi * u2) * sigma;
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

#include "features/pattern_table.inc"

}  // namespace

SamplingPattern generate_pattern(std::uint64_t seed) {
  GaussianSource gauss(seed);
  const double sigma = 31.0 / 5.0;
  auto draw = [&] {
    const long v = std::lround(gauss.next(sigma));
    return static_cast<std::int8_t>(std::clamp<long>(v, -kPatchRadius, kPatchRadius));
  };
  SamplingPattern pattern;
  for (auto& pair : pattern.pairs) {
    do {
      for (auto& c : pair) c = draw();
    } while (pair[0] == pair[2] && pair[1] == pair[3]);
  }
  return pattern;
}

const SamplingPattern& default_pattern() {
  static const SamplingPattern pattern = [] {
    SamplingPattern p;
    for (std::size_t i = 0; i < p.pairs.size(); ++i) {
      for (std::size_t k = 0; k < 4; ++k) p.pairs[i][k] = kPatternTable[i][k];
    }
    return p;
  }();
  return pattern;
}

}  // namespace approach
