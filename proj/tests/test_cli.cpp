#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "approach/cli.hpp"
#include "approach/io.hpp"

using namespace approach;
using namespace approach::cli;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "approach");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("approach_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

/// One simulated sequence shared by the tests in this file.
const fs::path& simulated() {
  static const fs::path dir = [] {
    const fs::path d = scratch("seq");
    const CliRun r = run({"simulate", d.string(), "--seed", "3"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) { return io::read_text(p); }

}  // namespace

TEST(Cli, SimulateWritesIoLayout) {
  const fs::path& seq = simulated();
  EXPECT_TRUE(fs::exists(seq / "calib.txt"));
  EXPECT_TRUE(fs::exists(seq / "poses.txt"));
  EXPECT_TRUE(fs::exists(seq / "bboxes.txt"));
  EXPECT_TRUE(fs::exists(seq / "objects.txt"));
  EXPECT_TRUE(fs::exists(seq / "image_0" / "000000.pgm"));
  EXPECT_TRUE(fs::exists(seq / "image_0" / "000020.pgm"));
  const auto manifest = io::load_sequence(seq);
  EXPECT_EQ(manifest.image_paths.size(), 21u);
  EXPECT_EQ(manifest.poses->size(), 21u);
}

TEST(Cli, SimulateThenNavigateArrives) {
  const fs::path& seq = simulated();
  const fs::path out = scratch("nav");
  const CliRun r = run({"navigate", seq.string(), (seq / "bboxes.txt").string(), "--out",
                     out.string(), "--overlays"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("arrived"), std::string::npos) << r.out;
  const auto advice = io::parse_advice_csv(slurp(out / "advice.csv"));
  ASSERT_FALSE(advice.empty());
  EXPECT_EQ(advice.back().advice, "arrived");
  for (const auto& a : advice) {
    EXPECT_NE(a.advice, "veer_left");
    EXPECT_NE(a.advice, "veer_right");
  }
  const auto traj = io::parse_trajectory_csv(slurp(out / "trajectory.csv"));
  EXPECT_EQ(traj.size(), advice.size());
  EXPECT_TRUE(traj.front().ground_truth.has_value());
  EXPECT_TRUE(fs::exists(out / "object.csv"));
  EXPECT_TRUE(fs::exists(out / "run_info.txt"));
  EXPECT_TRUE(fs::exists(out / "overlay_000001.ppm"));

  const CliRun e = run({"evaluate", seq.string(), out.string()});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  EXPECT_NE(e.out.find("# scale:"), std::string::npos);
  EXPECT_NE(e.out.find("video,mae,rmse"), std::string::npos);
  EXPECT_NE(e.out.find("video,mae\n"), std::string::npos);
}

TEST(Cli, ByteIdenticalReruns) {
  const fs::path& seq = simulated();
  const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
  for (const auto& out : {a, b}) {
    const CliRun r = run({"navigate", seq.string(), (seq / "bboxes.txt").string(), "--seed", "7",
                       "--out", out.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  for (const char* f : {"trajectory.csv", "advice.csv", "object.csv", "run_info.txt"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const fs::path s1 = scratch("sim_a"), s2 = scratch("sim_b");
  ASSERT_EQ(run({"simulate", s1.string(), "--steps", "3"}).code, kExitOk);
  ASSERT_EQ(run({"simulate", s2.string(), "--steps", "3"}).code, kExitOk);
  EXPECT_EQ(io::read_bytes(s1 / "image_0" / "000002.pgm"),
            io::read_bytes(s2 / "image_0" / "000002.pgm"));
}

TEST(Cli, MissingFrameIsUsageErrorNamingTheFrame) {
  const fs::path& seq = simulated();
  const fs::path boxes = scratch("boxes");
  fs::create_directories(boxes);
  io::write_text(boxes / "b.txt", "99 object 100 100 200 200\n");
  const CliRun r = run({"navigate", seq.string(), (boxes / "b.txt").string(), "--out",
                     scratch("nav_missing").string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("99"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrorsNameTheFlag) {
  const CliRun bad_mode = run({"navigate", simulated().string(), (simulated() / "bboxes.txt").string(),
                            "--update-mode", "sideways"});
  EXPECT_EQ(bad_mode.code, kExitUsage);
  EXPECT_NE(bad_mode.err.find("--update-mode"), std::string::npos) << bad_mode.err;
  const CliRun bad_scale = run({"navigate", simulated().string(),
                             (simulated() / "bboxes.txt").string(), "--scale", "fixed:-1"});
  EXPECT_EQ(bad_scale.code, kExitUsage);
  EXPECT_NE(bad_scale.err.find("--scale"), std::string::npos) << bad_scale.err;
  const CliRun zero_threshold = run({"navigate", simulated().string(),
                                  (simulated() / "bboxes.txt").string(), "--angle-threshold", "0"});
  EXPECT_EQ(zero_threshold.code, kExitUsage);
  EXPECT_EQ(run({"nonsense"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"features", "/nonexistent.png"}).code, kExitUsage);
}

TEST(Cli, HelpDocumentsDefaults) {
  const CliRun r = run({"navigate", "--help"});
  EXPECT_EQ(r.code, kExitOk);
  for (const char* s : {"--seed", "[0]", "--levels", "[4]", "--scale-factor", "[1.2]",
                        "--max-features", "[1000]", "--fast-threshold", "[20]",
                        "--ransac-threshold", "[0.001]", "--ransac-iters", "[2000]",
                        "--match-ratio", "[0.8]", "--angle-threshold", "[30]",
                        "--frame-interval", "[1]", "--update-mode", "[rigid]", "--scale",
                        "[gt]", "--camera", "[P0]", "--arrival-radius", "[0.5]", "--overlays",
                        "--out", "--target-label", "--target-frame", "Exit codes"}) {
    EXPECT_NE(r.out.find(s), std::string::npos) << s;
  }
  EXPECT_NE(run({"simulate", "--help"}).out.find("[1]"), std::string::npos);
}

TEST(Cli, FeaturesAndLocalize) {
  const fs::path& seq = simulated();
  const fs::path out = scratch("features");
  const CliRun f = run({"features", (seq / "image_0" / "000000.pgm").string(), "--out", out.string()});
  ASSERT_EQ(f.code, kExitOk) << f.err;
  EXPECT_TRUE(fs::exists(out / "keypoints.csv"));
  EXPECT_TRUE(fs::exists(out / "features.ppm"));

  const CliRun l = run({"localize", seq.string(), (seq / "bboxes.txt").string()});
  ASSERT_EQ(l.code, kExitOk) << l.err;
  EXPECT_NE(l.out.find("object"), std::string::npos) << l.out;
}

TEST(Cli, TextureFreeSequenceIsPipelineError) {
  const fs::path seq = scratch("blank");
  ASSERT_EQ(run({"simulate", seq.string(), "--steps", "3"}).code, kExitOk);
  for (const auto& entry : fs::directory_iterator(seq / "image_0")) {
    io::write_pgm(entry.path(), GrayImage(640, 480, 128));
  }
  const CliRun r = run({"navigate", seq.string(), (seq / "bboxes.txt").string(), "--out",
                        scratch("blank_out").string()});
  EXPECT_EQ(r.code, kExitPipeline) << r.err;
  EXPECT_NE(r.err.find("Initialization"), std::string::npos) << r.err;
}

TEST(Cli, BenchPrintsStages) {
  const fs::path& seq = simulated();
  const CliRun r = run({"bench", seq.string(), "--frames", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("stage,mean_s,max_s,count"), std::string::npos);
  EXPECT_NE(r.out.find("detection,"), std::string::npos);
  EXPECT_NE(r.out.find("trajectory_step,"), std::string::npos);
  EXPECT_NE(r.out.find("initialization,"), std::string::npos);
}

TEST(Cli, ExecutableExitCodes) {
  const std::string exe = APPROACH_CLI_PATH;
  auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status(exe + " --help"), kExitOk);
  EXPECT_EQ(status(exe + " navigate"), kExitUsage);
  EXPECT_EQ(status(exe + " evaluate " + simulated().string() + " " + simulated().string()),
            kExitPipeline);
}
