// Serial reference vs OpenMP kernel on KITTI-sized simulated frames.
// Run with --benchmark_filter to pick a kernel; set OMP_NUM_THREADS to vary
// the thread count.

#include <benchmark/benchmark.h>

#include <numbers>

#include "approach/features.hpp"
#include "approach/geometry.hpp"
#include "approach/matching.hpp"
#include "approach/simulator.hpp"

using namespace approach;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

sim::SimCamera kitti_camera() {
  sim::SimCamera cam;
  cam.K = CameraIntrinsics(707.0912, 707.0912, 601.8873, 183.1104);
  cam.width = 1226;
  cam.height = 370;
  return cam;
}

sim::Scene scene() {
  sim::SceneConfig sc;
  sc.background_points = 1500;
  sc.box_min = Vec3(-12.0, -3.0, 4.0);
  sc.box_max = Vec3(12.0, 3.0, 30.0);
  sc.object_center = Vec3(0.5, 0.5, 8.0);
  sc.seed = 2;
  return sim::make_scene(sc);
}

struct Fixture {
  GrayImage a, b;
  FeatureSet fa, fb;
  sim::SimCorrespondences corr;

  Fixture() {
    const auto s = scene();
    const auto cam = kitti_camera();
    const auto pb = sim::CameraPose::from_center_yaw(Vec3(0.0, 0.0, 0.5), 2 * kDeg);
    a = sim::render(s, {}, cam);
    b = sim::render(s, pb, cam);
    FeatureConfig cfg;
    fa = detect_and_describe(a, cfg);
    fb = detect_and_describe(b, cfg);
    corr = sim::correspond(s, {}, pb, cam, 0.5, 0.3, 3);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::kSerial : Execution::kParallel;
}

void set_label(benchmark::State& state) {
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_DetectFast(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(detect_fast(f.a, 20, 3, mode(state)));
  set_label(state);
}

void BM_BuildPyramid(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(build_pyramid(f.a, 4, 1.2, mode(state)));
  set_label(state);
}

void BM_DetectAndDescribe(benchmark::State& state) {
  const auto& f = fixture();
  FeatureConfig cfg;
  cfg.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(detect_and_describe(f.a, cfg));
  set_label(state);
}

void BM_NearestNeighbours(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(nearest_neighbours(f.fa.descriptors, f.fb.descriptors, mode(state)));
  }
  set_label(state);
}

void BM_Ransac(benchmark::State& state) {
  const auto& f = fixture();
  RansacParams p;
  p.threshold = 2.0 / kitti_camera().K.fu();
  p.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_essential_ransac(f.corr.set, kitti_camera().K, p));
  set_label(state);
}

}  // namespace

BENCHMARK(BM_DetectFast)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BuildPyramid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DetectAndDescribe)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NearestNeighbours)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Ransac)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
