#pragma once

// Brute-force Hamming matching with distance, ratio and cross-check filters.

#include <vector>

#include "approach/features.hpp"
#include "approach/geometry.hpp"
#include "approach/parallel.hpp"

namespace approach {

struct MatchPair {
  int index_a = 0;
  int index_b = 0;
  int distance = 0;

  bool operator==(const MatchPair&) const = default;
};

struct MatchParams {
  int max_distance = 64;
  double ratio = 0.8;
  bool use_max_distance = true;
  bool use_ratio = true;
  /// Mutual nearest neighbours only. With the ratio test on, the ratio is
  /// also checked from b's side, making the result symmetric in (a, b).
  bool cross_check = true;
  Execution execution = Execution::kParallel;
};

struct MatchResult {
  std::vector<MatchPair> pairs;  ///< ordered by index_a
  CorrespondenceSet correspondences;
};

int hamming(const Descriptor& a, const Descriptor& b);

/// Nearest and second-nearest neighbour of every row descriptor among the
/// column descriptors; ties go to the lower column index.
struct Neighbours {
  int best = -1;
  int best_distance = 257;
  int second_distance = 257;  ///< 257 when there is no second candidate
};
std::vector<Neighbours> nearest_neighbours(const std::vector<Descriptor>& rows,
                                           const std::vector<Descriptor>& cols,
                                           Execution exec = Execution::kParallel);

MatchResult match_features(const FeatureSet& fa, const FeatureSet& fb,
                           const MatchParams& params = {});

}  // namespace approach
