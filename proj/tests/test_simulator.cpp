#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "approach/simulator.hpp"
#include "support.hpp"

using namespace approach;
using support::code_of;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

sim::Scene single_point(const Vec3& p, std::uint64_t seed = 1) {
  sim::Scene s;
  s.points.push_back(p);
  s.seed = seed;
  return s;
}

}  // namespace

TEST(Project, OnAxisPointWithIdentityK) {
  sim::SimCamera cam;
  cam.K = CameraIntrinsics(1.0, 1.0, 0.0, 0.0);
  cam.width = 0;
  cam.height = 0;
  const auto v = sim::project_view(single_point({0, 0, 2}), sim::CameraPose{}, cam);
  ASSERT_EQ(v.points.size(), 1u);
  EXPECT_EQ(v.points[0], (ImagePoint{0.0, 0.0}));
}

TEST(Project, DropsPointsBehindAndOutside) {
  sim::Scene s;
  s.points = {{0, 0, 2}, {0, 0, -2}, {100, 0, 2}};
  const auto v = sim::project_view(s, sim::CameraPose{}, sim::SimCamera{});
  EXPECT_EQ(v.point_index, (std::vector<int>{0}));
  EXPECT_EQ(code_of([&] { sim::project_view(single_point({0, 0, -1}), {}, {}); }),
            ErrorCode::kNothingVisible);
}

TEST(Correspond, NoiselessPairsAreExactProjections) {
  sim::SceneConfig sc;
  sc.seed = 4;
  const auto scene = sim::make_scene(sc);
  const sim::SimCamera cam;
  const auto a = sim::CameraPose::from_center_yaw(Vec3::Zero(), 0.0);
  const auto b = sim::CameraPose::from_center_yaw(Vec3(0.2, 0.0, 0.5), 5.0 * kDeg);
  const auto c = sim::correspond(scene, a, b, cam, 0.0, 0.0, 1);
  ASSERT_GT(c.set.size(), 50u);
  for (std::size_t i = 0; i < c.set.size(); ++i) {
    const Vec3& X = scene.points[c.point_index[i]];
    EXPECT_EQ(c.set.pairs[i].p, cam.K.project(a.to_camera(X)));
    EXPECT_EQ(c.set.pairs[i].q, cam.K.project(b.to_camera(X)));
    EXPECT_EQ(c.is_outlier[i], 0);
  }
}

TEST(Correspond, ExactOutlierCount) {
  sim::Scene s;
  s.seed = 1;
  for (int i = 0; i < 100; ++i) s.points.emplace_back(-2.0 + 0.04 * i, 0.01 * (i % 7), 5.0 + 0.1 * (i % 10));
  const auto c = sim::correspond(s, {}, sim::CameraPose::from_center_yaw(Vec3(0.1, 0, 0), 0.0),
                                 sim::SimCamera{}, 0.0, 0.3, 77);
  ASSERT_EQ(c.set.size(), 100u);
  int flagged = 0;
  for (char f : c.is_outlier) flagged += f;
  EXPECT_EQ(flagged, 30);
}

TEST(Correspond, NoiseHasRequestedSpread) {
  sim::SceneConfig sc;
  sc.background_points = 2000;
  const auto scene = sim::make_scene(sc);
  const auto b = sim::CameraPose::from_center_yaw(Vec3(0, 0, 0.3), 0.0);
  const auto exact = sim::correspond(scene, {}, b, {}, 0.0, 0.0, 9);
  const auto noisy = sim::correspond(scene, {}, b, {}, 0.5, 0.0, 9);
  double ss = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < std::min(exact.set.size(), noisy.set.size()); ++i) {
    if (exact.point_index[i] != noisy.point_index[i]) continue;
    ss += std::pow(noisy.set.pairs[i].p.u - exact.set.pairs[i].p.u, 2);
    ++n;
  }
  ASSERT_GT(n, 1000);
  EXPECT_NEAR(std::sqrt(ss / n), 0.5, 0.05);
}

TEST(Render, EmptySceneIsUniformGray) {
  const auto img = sim::render(sim::Scene{}, {}, sim::SimCamera{});
  EXPECT_EQ(img, GrayImage(640, 480, sim::kBackground));
  const auto behind = sim::render(single_point({0, 0, -3}), {}, sim::SimCamera{});
  EXPECT_EQ(behind, GrayImage(640, 480, sim::kBackground));
}

TEST(Render, BlobCenteredOnProjection) {
  const sim::SimCamera cam;
  const auto img = sim::render(single_point({0, 0, 4}), {}, cam);
  double su = 0, sv = 0;
  int n = 0, min_u = 1 << 30, max_u = -1, min_v = 1 << 30, max_v = -1;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (img.at(x, y) == sim::kBackground) continue;
      min_u = std::min(min_u, x);
      max_u = std::max(max_u, x);
      min_v = std::min(min_v, y);
      max_v = std::max(max_v, y);
      su += x;
      sv += y;
      ++n;
    }
  }
  ASSERT_GT(n, 0);
  // The stamp's bounding square is centred on the projection.
  EXPECT_NEAR(0.5 * (min_u + max_u), 320.0, 1.0);
  EXPECT_NEAR(0.5 * (min_v + max_v), 240.0, 1.0);
  EXPECT_EQ(max_u - min_u + 1, sim::kStampCells * sim::kStampCell);
}

TEST(Render, FarToNearOcclusion) {
  sim::Scene s;
  s.seed = 3;
  s.points = {{0, 0, 4}, {0, 0, 8}};
  const auto both = sim::render(s, {}, sim::SimCamera{});
  const auto near = sim::render(single_point({0, 0, 4}, 3), {}, sim::SimCamera{});
  EXPECT_EQ(both, near);
}

TEST(Render, RequiresBounds) {
  sim::SimCamera cam;
  cam.width = 0;
  EXPECT_EQ(code_of([&] { sim::render(sim::Scene{}, {}, cam); }), ErrorCode::kInvalidArgument);
}

TEST(Determinism, SameSeedSameOutputs) {
  sim::SceneConfig sc;
  sc.seed = 42;
  sc.object_center = Vec3(0.5, 0.5, 6.0);
  const auto s1 = sim::make_scene(sc);
  const auto s2 = sim::make_scene(sc);
  EXPECT_EQ(s1.points, s2.points);
  EXPECT_EQ(s1.object_indices, s2.object_indices);
  const auto b = sim::CameraPose::from_center_yaw(Vec3(0.1, 0, 0.4), 2.0 * kDeg);
  const auto c1 = sim::correspond(s1, {}, b, {}, 0.5, 0.2, 5);
  const auto c2 = sim::correspond(s2, {}, b, {}, 0.5, 0.2, 5);
  ASSERT_EQ(c1.set.size(), c2.set.size());
  for (std::size_t i = 0; i < c1.set.size(); ++i) {
    EXPECT_EQ(c1.set.pairs[i].p, c2.set.pairs[i].p);
    EXPECT_EQ(c1.set.pairs[i].q, c2.set.pairs[i].q);
  }
  EXPECT_EQ(c1.is_outlier, c2.is_outlier);
  EXPECT_EQ(sim::render(s1, b, {}), sim::render(s2, b, {}));
  sc.seed = 43;
  EXPECT_NE(sim::make_scene(sc).points, s1.points);
}

TEST(Oracle, SelectPoseRecoversScriptedMotion) {
  sim::SceneConfig sc;
  sc.seed = 8;
  sc.background_points = 120;
  const auto scene = sim::make_scene(sc);
  const sim::SimCamera cam;
  const auto walk = sim::heading_walk(Vec3::Zero(), {0.0, 10 * kDeg, -5 * kDeg, 20 * kDeg}, 0.4);
  for (std::size_t k = 1; k < walk.poses.size(); ++k) {
    const auto& a = walk.poses[k - 1];
    const auto& b = walk.poses[k];
    const auto truth = sim::relative_pose(a, b);
    const auto c = sim::correspond(scene, a, b, cam, 0.0, 0.0, k);
    const std::vector<NormalizedPoint> p = [&] {
      std::vector<NormalizedPoint> v;
      for (const auto& x : c.set.pairs) v.push_back(cam.K.normalize(x.p));
      return v;
    }();
    const std::vector<NormalizedPoint> q = [&] {
      std::vector<NormalizedPoint> v;
      for (const auto& x : c.set.pairs) v.push_back(cam.K.normalize(x.q));
      return v;
    }();
    const auto E = estimate_essential_8point(p, q);
    const auto pose = select_pose(decompose_essential(E), c.set, cam.K);
    EXPECT_LT(rotation_angle_between(pose.R, truth.R), 1e-9) << "step " << k;
    EXPECT_LT(angle_between(pose.t, truth.t), 1e-9) << "step " << k;
  }
}

TEST(Walks, CamerasFaceTheirHeading) {
  const auto w = sim::straight_walk(Vec3(1, 0, 0), 30 * kDeg, 0.5, 4);
  ASSERT_EQ(w.poses.size(), 5u);
  for (const auto& p : w.poses) {
    const Vec3 ahead = p.to_camera(p.center() + Vec3(std::sin(30 * kDeg), 0, std::cos(30 * kDeg)));
    EXPECT_NEAR(ahead.x(), 0.0, 1e-12);
    EXPECT_NEAR(ahead.z(), 1.0, 1e-12);
  }
  EXPECT_NEAR((w.poses[4].center() - w.poses[0].center()).norm(), 2.0, 1e-12);
  // Positive yaw turns right: a point straight ahead of the old heading
  // moves to the left (negative X).
  const auto r = sim::CameraPose::from_center_yaw(Vec3::Zero(), 10 * kDeg);
  EXPECT_LT(r.to_camera(Vec3(0, 0, 5)).x(), 0.0);
  const auto look = sim::CameraPose::look_at(Vec3(0, 0, 0), Vec3(3, 0, 3));
  EXPECT_NEAR(look.to_camera(Vec3(3, 0, 3)).x(), 0.0, 1e-12);
}

TEST(ObjectBox, ContainsProjectedObjectPoints) {
  sim::SceneConfig sc;
  sc.object_center = Vec3(-0.5, 0.3, 5.0);
  const auto scene = sim::make_scene(sc);
  const sim::SimCamera cam;
  const auto box = sim::object_box(scene, {}, cam, 2, 8.0, "cone");
  EXPECT_EQ(box.frame, 2);
  EXPECT_EQ(box.label, "cone");
  for (int i : scene.object_indices) {
    const auto p = cam.K.project(scene.points[i]);
    EXPECT_TRUE(box.rect.contains(p));
  }
  EXPECT_NEAR((scene.object_centroid - *sc.object_center).norm(), 0.0, 1e-12);
  EXPECT_EQ(code_of([&] {
              sim::object_box(scene, sim::CameraPose::from_center_yaw(Vec3::Zero(), 3.14), cam, 0);
            }),
            ErrorCode::kNothingVisible);
}
