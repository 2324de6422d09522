#pragma once

#include <optional>
#include <span>

#include "approach/geometry.hpp"

namespace approach::detail {

/// Non-throwing 8-point core; nullopt on a rank-deficient design matrix.
/// Requires p.size() == q.size() >= 8.
std::optional<EssentialMatrix> solve_8point(std::span<const NormalizedPoint> p,
                                            std::span<const NormalizedPoint> q);

/// Number of pairs with Sampson distance below threshold and the truncated
/// quadratic cost sum(min(d^2, threshold^2)). Writes the mask when one is
/// given.
struct Support {
  int count = 0;
  double cost = 0.0;
};
Support measure_support(const EssentialMatrix& E,
                        std::span<const NormalizedPoint> p,
                        std::span<const NormalizedPoint> q, double threshold,
                        std::vector<char>* mask);

}  // namespace approach::detail
