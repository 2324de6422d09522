#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "approach/error.hpp"
#include "approach/geometry.hpp"
#include "geometry/internal.hpp"

namespace approach {
namespace detail {

Support measure_support(const EssentialMatrix& E,
                        std::span<const NormalizedPoint> p,
                        std::span<const NormalizedPoint> q, double threshold,
                        std::vector<char>* mask) {
  Support s;
  if (mask) mask->assign(p.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = E.sampson_distance(p[i], q[i]);
    if (d < threshold) {
      ++s.count;
      s.cost += d * d;
      if (mask) (*mask)[i] = 1;
    } else {
      s.cost += threshold * threshold;
    }
  }
  return s;
}

}  // namespace detail

namespace {

constexpr int kSampleSize = 8;
// Hypotheses are drawn and scored in fixed-size batches so the adaptive stop
// lands on the same iteration regardless of thread count.
constexpr int kBatchSize = 32;

struct Hypothesis {
  std::optional<EssentialMatrix> E;
  detail::Support support;
};

bool better(const detail::Support& a, const detail::Support& b) {
  if (b.count < 0) return true;
  return a.cost < b.cost || (a.cost == b.cost && a.count > b.count);
}

int required_iterations(int inliers, std::size_t n, double confidence,
                        int max_iterations) {
  const double w = static_cast<double>(inliers) / static_cast<double>(n);
  const double p_good = std::pow(w, kSampleSize);
  if (p_good >= 1.0) return 0;
  if (p_good <= 0.0) return max_iterations;
  const double k = std::log(1.0 - confidence) / std::log(1.0 - p_good);
  if (!std::isfinite(k) || k > max_iterations) return max_iterations;
  return static_cast<int>(std::ceil(k));
}

/// Iterated least-squares refit on the consensus set of `E`,
/// kept while the truncated cost improves. Returns the final mask.
std::vector<char> local_optimize(EssentialMatrix& E, detail::Support& support,
                                 std::span<const NormalizedPoint> p,
                                 std::span<const NormalizedPoint> q, double threshold,
                                 int passes) {
  std::vector<char> mask;
  support = detail::measure_support(E, p, q, threshold, &mask);
  for (int pass = 0; pass < passes; ++pass) {
    std::vector<NormalizedPoint> ip, iq;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (mask[i]) {
        ip.push_back(p[i]);
        iq.push_back(q[i]);
      }
    }
    if (ip.size() < kSampleSize) break;
    auto refit = detail::solve_8point(ip, iq);
    if (!refit) break;
    std::vector<char> refit_mask;
    const auto s = detail::measure_support(*refit, p, q, threshold, &refit_mask);
    if (better(support, s)) break;
    const bool unchanged = refit_mask == mask;
    support = s;
    E = *refit;
    mask = std::move(refit_mask);
    if (unchanged) break;
  }
  return mask;
}

Hypothesis evaluate(const std::array<int, kSampleSize>& sample,
                    std::span<const NormalizedPoint> p,
                    std::span<const NormalizedPoint> q, double threshold) {
  std::array<NormalizedPoint, kSampleSize> sp, sq;
  for (int k = 0; k < kSampleSize; ++k) {
    sp[k] = p[sample[k]];
    sq[k] = q[sample[k]];
  }
  Hypothesis h;
  h.E = detail::solve_8point(sp, sq);
  if (h.E) h.support = detail::measure_support(*h.E, p, q, threshold, nullptr);
  return h;
}

}  // namespace

EssentialEstimate estimate_essential_ransac(const CorrespondenceSet& matches,
                                            const CameraIntrinsics& K,
                                            const RansacParams& params) {
  const std::size_t n = matches.size();
  if (n < kSampleSize) {
    throw Error(ErrorCode::kTooFewMatches,
                "need at least 8 correspondences, got " + std::to_string(n));
  }
  std::vector<NormalizedPoint> p, q;
  p.reserve(n);
  q.reserve(n);
  for (const auto& c : matches.pairs) {
    p.push_back(K.normalize(c.p));
    q.push_back(K.normalize(c.q));
  }

  std::mt19937_64 rng(params.seed);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);

  std::optional<EssentialMatrix> best_E;
  detail::Support best{-1, 0.0};
  int limit = std::max(1, params.max_iterations);
  int iterations = 0;

  std::vector<std::array<int, kSampleSize>> samples;
  std::vector<Hypothesis> results;
  while (iterations < limit) {
    const int batch = std::min(kBatchSize, limit - iterations);
    samples.resize(batch);
    for (auto& s : samples) {
      for (int k = 0; k < kSampleSize; ++k) {
        int idx;
        do {
          idx = pick(rng);
        } while (std::find(s.begin(), s.begin() + k, idx) != s.begin() + k);
        s[k] = idx;
      }
    }
    results.assign(batch, Hypothesis{});
    if (params.execution == Execution::kParallel) {
#pragma omp parallel for schedule(static)
      for (int b = 0; b < batch; ++b) {
        results[b] = evaluate(samples[b], p, q, params.threshold);
      }
    } else {
      for (int b = 0; b < batch; ++b) {
        results[b] = evaluate(samples[b], p, q, params.threshold);
      }
    }
    bool improved = false;
    for (int b = 0; b < batch; ++b) {
      if (results[b].E && better(results[b].support, best)) {
        best = results[b].support;
        best_E = results[b].E;
        improved = true;
      }
    }
    if (improved) {
      local_optimize(*best_E, best, p, q, params.threshold, params.refine_passes);
    }
    iterations += batch;
    if (best_E) {
      limit = std::min(limit, required_iterations(best.count, n,
                                                  params.confidence,
                                                  params.max_iterations));
    }
  }

  if (!best_E) {
    throw Error(ErrorCode::kDegenerateGeometry,
                "every sampled minimal set was rank-deficient");
  }

  std::vector<char> mask =
      local_optimize(*best_E, best, p, q, params.threshold, params.refine_passes);

  if (best.count < params.min_inliers) {
    throw Error(ErrorCode::kNoConsensus,
                "best hypothesis has " + std::to_string(best.count) +
                    " inliers, need " + std::to_string(params.min_inliers));
  }

  EssentialEstimate out;
  out.E = *best_E;
  out.inlier_mask = std::move(mask);
  out.num_inliers = best.count;
  out.iterations = iterations;
  return out;
}

}  // namespace approach
