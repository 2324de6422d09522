#include <bit>

#include "approach/error.hpp"
#include "approach/matching.hpp"

namespace approach {
namespace {

Neighbours scan(const Descriptor& d, const std::vector<Descriptor>& cols) {
  Neighbours nb;
  for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
    const int dist = hamming(d, cols[j]);
    if (dist < nb.best_distance) {
      nb.second_distance = nb.best_distance;
      nb.best_distance = dist;
      nb.best = j;
    } else if (dist < nb.second_distance) {
      nb.second_distance = dist;
    }
  }
  return nb;
}

bool passes(const Neighbours& nb, const MatchParams& params) {
  if (params.use_max_distance && nb.best_distance > params.max_distance) return false;
  if (params.use_ratio && nb.second_distance <= 256 &&
      !(nb.best_distance < params.ratio * nb.second_distance)) {
    return false;
  }
  return true;
}

}  // namespace

int hamming(const Descriptor& a, const Descriptor& b) {
  int d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) d += std::popcount(a[k] ^ b[k]);
  return d;
}

std::vector<Neighbours> nearest_neighbours(const std::vector<Descriptor>& rows,
                                           const std::vector<Descriptor>& cols,
                                           Execution exec) {
  std::vector<Neighbours> out(rows.size());
  const int n = static_cast<int>(rows.size());
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) out[i] = scan(rows[i], cols);
  } else {
    for (int i = 0; i < n; ++i) out[i] = scan(rows[i], cols);
  }
  return out;
}

MatchResult match_features(const FeatureSet& fa, const FeatureSet& fb,
                           const MatchParams& params) {
  if (fa.empty() || fb.empty()) {
    throw Error(ErrorCode::kEmptyFeatureSet, "cannot match an empty feature set");
  }
  const auto forward = nearest_neighbours(fa.descriptors, fb.descriptors, params.execution);
  std::vector<Neighbours> backward;
  if (params.cross_check) {
    backward = nearest_neighbours(fb.descriptors, fa.descriptors, params.execution);
  }

  MatchResult out;
  for (int i = 0; i < static_cast<int>(forward.size()); ++i) {
    const auto& nb = forward[i];
    if (nb.best < 0 || !passes(nb, params)) continue;
    if (params.cross_check) {
      const auto& rev = backward[nb.best];
      if (rev.best != i || !passes(rev, params)) continue;
    }
    out.pairs.push_back({i, nb.best, nb.best_distance});
    out.correspondences.pairs.push_back(
        {fa.keypoints[i].position, fb.keypoints[nb.best].position});
  }
  return out;
}

}  // namespace approach
