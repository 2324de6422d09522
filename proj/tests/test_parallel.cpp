#include <gtest/gtest.h>

#include <omp.h>

#include <numbers>

#include "approach/features.hpp"
#include "approach/geometry.hpp"
#include "approach/matching.hpp"
#include "approach/simulator.hpp"

using namespace approach;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

sim::Scene textured_scene() {
  sim::SceneConfig sc;
  sc.background_points = 500;
  sc.object_center = Vec3(0.3, 0.5, 6.0);
  sc.seed = 21;
  return sim::make_scene(sc);
}

const GrayImage& frame(int k) {
  static const std::vector<GrayImage> frames = [] {
    const auto scene = textured_scene();
    const auto walk = sim::heading_walk(Vec3::Zero(), {0.0, 3 * kDeg}, 0.3);
    std::vector<GrayImage> out;
    for (const auto& pose : walk.poses) out.push_back(sim::render(scene, pose, sim::SimCamera{}));
    return out;
  }();
  return frames.at(k);
}

FeatureSet features(int k, Execution exec) {
  FeatureConfig cfg;
  cfg.execution = exec;
  return detect_and_describe(frame(k), cfg);
}

}  // namespace

TEST(Parallel, RunsWithSeveralThreads) { EXPECT_GE(omp_get_max_threads(), 2); }

TEST(Parallel, FastDetectionMatchesSerial) {
  for (int t : {10, 20, 40}) {
    const auto s = detect_fast(frame(0), t, 3, Execution::kSerial);
    const auto p = detect_fast(frame(0), t, 3, Execution::kParallel);
    ASSERT_FALSE(s.empty());
    EXPECT_EQ(s, p) << "threshold " << t;
  }
}

TEST(Parallel, PyramidMatchesSerial) {
  EXPECT_EQ(build_pyramid(frame(0), 4, 1.2, Execution::kSerial),
            build_pyramid(frame(0), 4, 1.2, Execution::kParallel));
  EXPECT_EQ(build_pyramid(frame(1), 3, 1.7, Execution::kSerial),
            build_pyramid(frame(1), 3, 1.7, Execution::kParallel));
}

TEST(Parallel, DetectAndDescribeMatchesSerial) {
  const auto s = features(0, Execution::kSerial);
  ASSERT_GT(s.size(), 100u);
  EXPECT_EQ(s, features(0, Execution::kParallel));
}

TEST(Parallel, NeighboursMatchSerial) {
  const auto a = features(0, Execution::kSerial);
  const auto b = features(1, Execution::kSerial);
  const auto s = nearest_neighbours(a.descriptors, b.descriptors, Execution::kSerial);
  const auto p = nearest_neighbours(a.descriptors, b.descriptors, Execution::kParallel);
  ASSERT_EQ(s.size(), p.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s[i].best, p[i].best);
    EXPECT_EQ(s[i].best_distance, p[i].best_distance);
    EXPECT_EQ(s[i].second_distance, p[i].second_distance);
  }
}

TEST(Parallel, MatchFeaturesMatchesSerial) {
  const auto a = features(0, Execution::kSerial);
  const auto b = features(1, Execution::kSerial);
  MatchParams ps, pp;
  ps.execution = Execution::kSerial;
  pp.execution = Execution::kParallel;
  const auto s = match_features(a, b, ps);
  const auto p = match_features(a, b, pp);
  ASSERT_FALSE(s.pairs.empty());
  EXPECT_EQ(s.pairs, p.pairs);
}

TEST(Parallel, RansacMatchesSerial) {
  const auto scene = textured_scene();
  const auto b = sim::CameraPose::from_center_yaw(Vec3(0.1, 0.0, 0.4), 4 * kDeg);
  const sim::SimCamera cam;
  const auto c = sim::correspond(scene, {}, b, cam, 0.5, 0.3, 17);
  RansacParams rs, rp;
  rs.threshold = rp.threshold = 2.0 / cam.K.fu();
  rs.seed = rp.seed = 5;
  rs.execution = Execution::kSerial;
  rp.execution = Execution::kParallel;
  const auto s = estimate_essential_ransac(c.set, cam.K, rs);
  const auto p = estimate_essential_ransac(c.set, cam.K, rp);
  EXPECT_TRUE(s.E.matrix() == p.E.matrix());
  EXPECT_EQ(s.inlier_mask, p.inlier_mask);
  EXPECT_EQ(s.num_inliers, p.num_inliers);
  EXPECT_EQ(s.iterations, p.iterations);
}
