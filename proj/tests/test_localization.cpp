#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "approach/localization.hpp"
#include "approach/simulator.hpp"
#include "support.hpp"

using namespace approach;
using support::code_of;

namespace {

FeatureSet features_at(std::initializer_list<ImagePoint> pts) {
  FeatureSet fs;
  for (const auto& p : pts) {
    Keypoint kp;
    kp.position = p;
    kp.level_position = p;
    fs.keypoints.push_back(kp);
    fs.descriptors.push_back(Descriptor{});
  }
  return fs;
}

struct Fixture {
  sim::Scene scene;
  sim::SimCamera cam;
  sim::CameraPose a;
  sim::CameraPose b;
};

Fixture object_ahead(std::uint64_t seed = 3, int background = 200) {
  sim::SceneConfig sc;
  sc.seed = seed;
  sc.background_points = background;
  sc.object_center = Vec3(1.0, 0.0, 4.0);
  sc.object_grid = 6;
  Fixture f;
  f.scene = sim::make_scene(sc);
  f.a = sim::CameraPose::from_center_yaw(Vec3::Zero(), 0.0);
  f.b = sim::CameraPose::from_center_yaw(Vec3(0.0, 0.0, 0.3), 0.0);
  return f;
}

LocalizationResult localize(const Fixture& f, double noise_px, std::uint64_t seed,
                            const ScaleSource& scale, LocalizationParams params = {}) {
  const auto full = sim::correspond(f.scene, f.a, f.b, f.cam, noise_px, 0.0, seed);
  const auto obj = sim::correspond(f.scene, f.a, f.b, f.cam, noise_px, 0.0, seed + 1,
                                   &f.scene.object_indices);
  const auto box = sim::object_box(f.scene, f.a, f.cam, 0);
  return localize_from_matches(full.set, obj.set, box, f.cam.K, scale, params);
}

}  // namespace

TEST(ObjectCenter, SquareCentroid) {
  const auto fs = features_at({{10, 10}, {20, 10}, {10, 20}, {20, 20}});
  const ImagePoint c = object_center(fs, std::nullopt, 4);
  EXPECT_DOUBLE_EQ(c.u, 15.0);
  EXPECT_DOUBLE_EQ(c.v, 15.0);
}

TEST(ObjectCenter, SingleFeatureWithLoweredMinimum) {
  const ImagePoint c = object_center(features_at({{7, 3}}), std::nullopt, 1);
  EXPECT_EQ(c, (ImagePoint{7.0, 3.0}));
}

TEST(ObjectCenter, RestrictedToIndices) {
  const auto fs = features_at({{0, 0}, {50, 50}, {10, 0}, {90, 90}});
  const ImagePoint c = object_center(fs, std::vector<int>{0, 2}, 2);
  EXPECT_EQ(c, (ImagePoint{5.0, 0.0}));
}

TEST(ObjectCenter, TooFewFeatures) {
  const auto fs = features_at({{1, 1}, {2, 2}});
  EXPECT_EQ(code_of([&] { object_center(fs); }), ErrorCode::kTooFewObjectFeatures);
  EXPECT_EQ(code_of([&] { object_center(FeatureSet{}, std::nullopt, 0); }),
            ErrorCode::kTooFewObjectFeatures);
  EXPECT_EQ(code_of([&] { object_center(fs, std::vector<int>{5}, 1); }),
            ErrorCode::kInvalidArgument);
}

TEST(ObjectCenter, FullFrameBoxIsGlobalCentroid) {
  const auto f = object_ahead();
  const auto img = sim::render(f.scene, f.a, f.cam);
  const FeatureConfig cfg;
  const auto all = detect_and_describe(img, cfg);
  const auto boxed = detect_and_describe(
      img, cfg, Rect{0.0, 0.0, img.width - 1.0, img.height - 1.0});
  ASSERT_EQ(all, boxed);
  const ImagePoint c1 = object_center(all);
  const ImagePoint c2 = object_center(boxed);
  EXPECT_EQ(c1, c2);
}

TEST(BoundingBoxTest, InvertedAndEmptyBoxesThrow) {
  EXPECT_EQ(code_of([] { BoundingBox::make(0, "x", 10, 0, 5, 5); }), ErrorCode::kInvertedBox);
  EXPECT_EQ(code_of([] { BoundingBox::make(0, "x", 0, 5, 5, 5); }), ErrorCode::kInvertedBox);
  const auto box = BoundingBox::make(2, "car", 1, 2, 3, 4);
  EXPECT_EQ(box.center(), (ImagePoint{2.0, 3.0}));
  EXPECT_TRUE(box.inside(4, 5));
  EXPECT_FALSE(box.inside(3, 5));
}

TEST(Localize, NoiselessInjectedMatchesRecoverObject) {
  const auto f = object_ahead();
  const auto r = localize(f, 0.0, 11, ScaleSource::ground_truth(0.3));
  EXPECT_NEAR((r.location.position - Vec3(1.0, 0.0, 4.0)).norm(), 0.0, 1e-3);
  EXPECT_GT(r.location.position.z(), 0.0);
  EXPECT_EQ(r.location.provenance, ScaleProvenance::kGroundTruthBaseline);
  EXPECT_NEAR(r.pose.scale, 0.3, 1e-15);
}

TEST(Localize, NoisyMedianWithinFifteenCentimetres) {
  const auto f = object_ahead(3, 600);
  LocalizationParams params;
  params.ransac.threshold = 2.0 / f.cam.K.fu();
  std::vector<double> errors;
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    params.ransac.seed = trial;
    const auto r = localize(f, 0.5, 1000 + 2 * trial, ScaleSource::ground_truth(0.3), params);
    errors.push_back((r.location.position - Vec3(1.0, 0.0, 4.0)).norm());
  }
  std::nth_element(errors.begin(), errors.begin() + 25, errors.end());
  EXPECT_LT(errors[25], 0.15);
}

TEST(Localize, ReprojectsIntoTheBox) {
  for (std::uint64_t seed : {3u, 4u, 5u, 6u}) {
    const auto f = object_ahead(seed);
    const auto box = sim::object_box(f.scene, f.a, f.cam, 0);
    const auto r = localize(f, 0.5, seed * 7, ScaleSource::ground_truth(0.3));
    const ImagePoint p = f.cam.K.project(r.location.position);
    EXPECT_GE(p.u, box.rect.u_min - 5.0);
    EXPECT_LE(p.u, box.rect.u_max + 5.0);
    EXPECT_GE(p.v, box.rect.v_min - 5.0);
    EXPECT_LE(p.v, box.rect.v_max + 5.0);
  }
}

TEST(Localize, ScaleEquivariance) {
  const auto f = object_ahead();
  for (double noise : {0.0, 0.5}) {
    const auto r1 = localize(f, noise, 21, ScaleSource::fixed(0.3));
    const auto r2 = localize(f, noise, 21, ScaleSource::fixed(0.6));
    EXPECT_EQ(r2.location.position, 2.0 * r1.location.position);
    EXPECT_EQ(r2.location.provenance, ScaleProvenance::kUserSupplied);
  }
  const auto unit = localize(f, 0.0, 21, ScaleSource::unit());
  EXPECT_EQ(unit.location.provenance, ScaleProvenance::kUnit);
  EXPECT_NEAR(unit.location.position.z() * 0.3, 4.0, 1e-3);
}

TEST(Localize, BoxCenterAblation) {
  const auto f = object_ahead();
  LocalizationParams params;
  params.use_box_center = true;
  const auto box = sim::object_box(f.scene, f.a, f.cam, 0);
  const auto r = localize(f, 0.0, 11, ScaleSource::ground_truth(0.3), params);
  EXPECT_EQ(r.p, box.center());
}

TEST(Localize, ZeroBaselineRefused) {
  auto f = object_ahead();
  f.b = f.a;
  EXPECT_EQ(code_of([&] { localize(f, 0.0, 1, ScaleSource::unit()); }),
            ErrorCode::kInsufficientParallax);
}

TEST(Localize, TooFewObjectFeatures) {
  const auto f = object_ahead();
  const auto full = sim::correspond(f.scene, f.a, f.b, f.cam, 0.0, 0.0, 1);
  const std::vector<int> few(f.scene.object_indices.begin(),
                             f.scene.object_indices.begin() + 3);
  const auto obj = sim::correspond(f.scene, f.a, f.b, f.cam, 0.0, 0.0, 2, &few);
  const auto box = sim::object_box(f.scene, f.a, f.cam, 0);
  EXPECT_EQ(code_of([&] {
              localize_from_matches(full.set, obj.set, box, f.cam.K, ScaleSource::unit());
            }),
            ErrorCode::kTooFewObjectFeatures);
}

TEST(Localize, EpipolarFilterDropsObjectOutliers) {
  const auto f = object_ahead();
  const auto full = sim::correspond(f.scene, f.a, f.b, f.cam, 0.0, 0.0, 1);
  auto obj = sim::correspond(f.scene, f.a, f.b, f.cam, 0.0, 0.0, 2, &f.scene.object_indices);
  obj.set.pairs[0].q.u += 40.0;
  obj.set.pairs[1].q.v -= 25.0;
  const auto box = sim::object_box(f.scene, f.a, f.cam, 0);
  const auto r = localize_from_matches(full.set, obj.set, box, f.cam.K,
                                       ScaleSource::ground_truth(0.3));
  EXPECT_EQ(r.object_pairs.size(), obj.set.size() - 2);
}

TEST(Localize, RenderedPairEndToEnd) {
  // Stamps are drawn at whole-pixel centres, so rendered matches carry
  // rounding noise on top of detection error.
  const auto f = object_ahead(8);
  const auto box = sim::object_box(f.scene, f.a, f.cam, 0);
  const auto r = localize_object(sim::render(f.scene, f.a, f.cam),
                                 sim::render(f.scene, f.b, f.cam), box, f.cam.K,
                                 ScaleSource::ground_truth(0.3));
  EXPECT_LT((r.location.position - Vec3(1.0, 0.0, 4.0)).norm(), 0.5);
}
