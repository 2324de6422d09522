#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "approach/error.hpp"
#include "approach/features.hpp"
#include "approach/matching.hpp"
#include "approach/simulator.hpp"
#include "oracles.hpp"

using namespace approach;

namespace {

Descriptor random_descriptor(std::mt19937_64& rng) { return {rng(), rng(), rng(), rng()}; }

FeatureSet random_set(std::mt19937_64& rng, int n) {
  FeatureSet fs;
  for (int i = 0; i < n; ++i) {
    Keypoint kp;
    kp.position = {static_cast<double>(i), static_cast<double>(2 * i)};
    fs.keypoints.push_back(kp);
    fs.descriptors.push_back(random_descriptor(rng));
  }
  return fs;
}

Descriptor flip_bits(Descriptor d, std::mt19937_64& rng, int bits) {
  std::uniform_int_distribution<int> u(0, 255);
  std::set<int> chosen;
  while (static_cast<int>(chosen.size()) < bits) chosen.insert(u(rng));
  for (int b : chosen) d[b / 64] ^= std::uint64_t{1} << (b % 64);
  return d;
}

// Straightforward reading of the three filters, including the ratio test on
// b's side when cross-checking.
std::set<std::pair<int, int>> brute_matches(const FeatureSet& a, const FeatureSet& b,
                                            const MatchParams& mp) {
  auto nn = [](const std::vector<Descriptor>& rows, const std::vector<Descriptor>& cols, int i) {
    int best = -1, d1 = 257, d2 = 257;
    for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
      const int d = oracle::hamming_bits(rows[i], cols[j]);
      if (d < d1) {
        d2 = d1;
        d1 = d;
        best = j;
      } else if (d < d2) {
        d2 = d;
      }
    }
    return std::array<int, 3>{best, d1, d2};
  };
  auto passes = [&](const std::array<int, 3>& r) {
    if (mp.use_max_distance && r[1] > mp.max_distance) return false;
    if (mp.use_ratio && !(r[1] < mp.ratio * r[2])) return false;
    return true;
  };
  std::set<std::pair<int, int>> out;
  for (int i = 0; i < static_cast<int>(a.size()); ++i) {
    const auto f = nn(a.descriptors, b.descriptors, i);
    if (f[0] < 0 || !passes(f)) continue;
    if (mp.cross_check) {
      const auto r = nn(b.descriptors, a.descriptors, f[0]);
      if (r[0] != i || !passes(r)) continue;
    }
    out.insert({i, f[0]});
  }
  return out;
}

std::set<std::pair<int, int>> as_set(const MatchResult& r) {
  std::set<std::pair<int, int>> out;
  for (const auto& m : r.pairs) out.insert({m.index_a, m.index_b});
  return out;
}

}  // namespace

TEST(Hamming, Examples) {
  const Descriptor a{0x0123456789abcdefull, 42, ~0ull, 7};
  EXPECT_EQ(hamming(a, a), 0);
  EXPECT_EQ(hamming(a, {~a[0], ~a[1], ~a[2], ~a[3]}), 256);
  EXPECT_EQ(hamming({1, 0, 0, 0}, {7, 0, 0, 0}), 2);
}

TEST(Hamming, MetricAxioms) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_descriptor(rng), b = random_descriptor(rng);
    const auto c = flip_bits(a, rng, i % 40);
    EXPECT_EQ(hamming(a, b), oracle::hamming_bits(a, b));
    EXPECT_GE(hamming(a, b), 0);
    EXPECT_EQ(hamming(a, b), hamming(b, a));
    EXPECT_LE(hamming(a, b), hamming(a, c) + hamming(c, b));
    EXPECT_EQ(hamming(a, c), i % 40);
  }
}

TEST(Match, EmptySetThrows) {
  std::mt19937_64 rng(1);
  const auto fs = random_set(rng, 3);
  try {
    match_features(FeatureSet{}, fs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyFeatureSet);
  }
  EXPECT_THROW(match_features(fs, FeatureSet{}), Error);
}

TEST(Match, CopyMatchesItself) {
  std::mt19937_64 rng(2);
  const auto fa = random_set(rng, 200);
  const auto r = match_features(fa, fa);
  ASSERT_EQ(r.pairs.size(), 200u);
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    EXPECT_EQ(r.pairs[i].index_a, static_cast<int>(i));
    EXPECT_EQ(r.pairs[i].index_b, static_cast<int>(i));
    EXPECT_EQ(r.pairs[i].distance, 0);
  }
  EXPECT_EQ(r.correspondences.size(), 200u);
  EXPECT_EQ(r.correspondences.pairs[5].p.u, fa.keypoints[5].position.u);
  EXPECT_EQ(r.correspondences.pairs[5].q.v, fa.keypoints[5].position.v);
}

TEST(Match, ExactCopyBeatsOneBitFlip) {
  std::mt19937_64 rng(3);
  const auto fa = random_set(rng, 1);
  FeatureSet fb = fa;
  fb.keypoints.push_back(fa.keypoints[0]);
  fb.descriptors.push_back(flip_bits(fa.descriptors[0], rng, 1));
  std::swap(fb.descriptors[0], fb.descriptors[1]);
  const auto r = match_features(fa, fb);
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].index_b, 1);
  EXPECT_EQ(r.pairs[0].distance, 0);
}

TEST(Match, TiesGoToLowestIndex) {
  std::mt19937_64 rng(4);
  const auto fa = random_set(rng, 1);
  FeatureSet fb;
  for (int i = 0; i < 3; ++i) {
    fb.keypoints.push_back(fa.keypoints[0]);
    fb.descriptors.push_back(fa.descriptors[0]);
  }
  const auto nn = nearest_neighbours(fa.descriptors, fb.descriptors);
  EXPECT_EQ(nn[0].best, 0);
  EXPECT_EQ(nn[0].second_distance, 0);
  MatchParams mp;
  mp.use_ratio = false;
  const auto r = match_features(fa, fb, mp);
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].index_b, 0);
}

TEST(Match, AgreesWithBruteForceUnderEveryFilterCombination) {
  std::mt19937_64 rng(5);
  auto fa = random_set(rng, 150);
  FeatureSet fb = random_set(rng, 40);
  for (int i = 0; i < 120; ++i) {
    fb.keypoints.push_back(fa.keypoints[i]);
    fb.descriptors.push_back(flip_bits(fa.descriptors[i], rng, i % 90));
  }
  for (int mask = 0; mask < 8; ++mask) {
    MatchParams mp;
    mp.use_max_distance = mask & 1;
    mp.use_ratio = mask & 2;
    mp.cross_check = mask & 4;
    const auto r = match_features(fa, fb, mp);
    EXPECT_EQ(as_set(r), brute_matches(fa, fb, mp)) << "filters " << mask;
    for (const auto& m : r.pairs) {
      EXPECT_EQ(m.distance, oracle::hamming_bits(fa.descriptors[m.index_a],
                                                 fb.descriptors[m.index_b]));
      if (mp.use_max_distance) EXPECT_LE(m.distance, mp.max_distance);
    }
    for (std::size_t i = 1; i < r.pairs.size(); ++i) {
      EXPECT_LT(r.pairs[i - 1].index_a, r.pairs[i].index_a);
    }
  }
}

TEST(Match, CrossCheckedResultIsSymmetric) {
  std::mt19937_64 rng(6);
  auto fa = random_set(rng, 100);
  FeatureSet fb = random_set(rng, 30);
  for (int i = 0; i < 80; ++i) {
    fb.keypoints.push_back(fa.keypoints[i]);
    fb.descriptors.push_back(flip_bits(fa.descriptors[i], rng, i % 70));
  }
  const auto ab = as_set(match_features(fa, fb));
  std::set<std::pair<int, int>> ba;
  for (const auto& m : match_features(fb, fa).pairs) ba.insert({m.index_b, m.index_a});
  EXPECT_EQ(ab, ba);
  EXPECT_FALSE(ab.empty());
}

TEST(Match, RenderedShiftRecoversFlow) {
  // A fronto-parallel scene at 10 m and a sideways step that moves every
  // projection exactly 3 pixels to the left.
  sim::SceneConfig sc;
  sc.seed = 12;
  sc.background_points = 250;
  sc.box_min = {-8.0, -6.0, 10.0};
  sc.box_max = {8.0, 6.0, 10.0};
  const auto scene = sim::make_scene(sc);
  const sim::SimCamera cam;
  const double depth = 10.0;
  const double shift_px = 3.0;
  const auto a = sim::CameraPose::from_center_yaw(Vec3::Zero(), 0.0);
  const auto b = sim::CameraPose::from_center_yaw(
      Vec3(shift_px * depth / cam.K.fu(), 0.0, 0.0), 0.0);
  const auto fa = detect_and_describe(sim::render(scene, a, cam), FeatureConfig{});
  const auto fb = detect_and_describe(sim::render(scene, b, cam), FeatureConfig{});
  const auto r = match_features(fa, fb);
  ASSERT_FALSE(r.pairs.empty());
  EXPECT_GE(r.pairs.size(), 0.8 * std::min(fa.size(), fb.size()));

  int good = 0;
  for (const auto& c : r.correspondences.pairs) {
    good += std::hypot(c.p.u - shift_px - c.q.u, c.p.v - c.q.v) <= 1.0;
  }
  EXPECT_GE(good, 0.95 * r.pairs.size());
}
