#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "bmc/cli.hpp"
#include "bmc/losses.hpp"
#include "bmc/pose_io.hpp"
#include "bmc/camera_depth.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace bmc;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;

  std::vector<json> lines() const {
    std::vector<json> v;
    std::istringstream in(out);
    for (std::string line; std::getline(in, line);) {
      if (!line.empty()) v.push_back(json::parse(line));
    }
    return v;
  }
};

Outcome run(std::vector<std::string> args, const cli::Hooks& hooks = {}) {
  args.insert(args.begin(), "bmc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err, hooks);
  return {code, out.str(), err.str()};
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fixtures::scratch_dir(::testing::UnitTest::GetInstance()->current_test_info()->name());
    corpus = fixtures::corpus(30, 71);
    save_poses(corpus, dir / "corpus.json");
  }

  std::string path(const char* name) const { return (dir / name).string(); }

  std::filesystem::path dir;
  std::vector<HandPose> corpus;
};

}  // namespace

TEST_F(Cli, FitThenEvaluateTheFittingCorpusIsFeasible) {
  const Outcome fit = run({"fit-limits", path("corpus.json"), "--out", path("limits.json")});
  ASSERT_EQ(fit.code, 0) << fit.err;
  const json summary = fit.lines().at(0);
  EXPECT_EQ(summary["used"], 30);
  EXPECT_EQ(summary["hull_area"].size(), 15u);

  const Outcome eval = run({"evaluate", path("corpus.json"), "--limits", path("limits.json")});
  ASSERT_EQ(eval.code, 0) << eval.err;
  const auto lines = eval.lines();
  ASSERT_EQ(lines.size(), 30u);
  const LimitSet limits = load_limits(path("limits.json"));
  for (std::size_t s = 0; s < lines.size(); ++s) {
    EXPECT_EQ(lines[s]["sample"], s);
    EXPECT_TRUE(lines[s]["feasible"].get<bool>());
    // Bit-exact against the library.
    EXPECT_EQ(lines[s]["total"].get<double>(), bmc_loss(corpus[s], limits, LossWeights{}).total);
  }
}

TEST_F(Cli, ViolatingSampleExitsOneAndListsViolations) {
  ASSERT_EQ(run({"fit-limits", path("corpus.json"), "-o", path("limits.json")}).code, 0);
  Joints<double> j = corpus[0].joints();
  j[8] = j[7] + 3.0 * (j[8] - j[7]);  // stretch the index tip bone
  save_poses({corpus[1], HandPose(j)}, dir / "bad.json");
  const Outcome eval = run({"evaluate", path("bad.json"), "--limits", path("limits.json")});
  EXPECT_EQ(eval.code, 1);
  const auto lines = eval.lines();
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_TRUE(lines[0]["feasible"].get<bool>());
  EXPECT_FALSE(lines[1]["feasible"].get<bool>());
  bool found = false;
  for (const json& v : lines[1]["violations"]["bone_length"]) found = found || v["index"] == finger_bone(1, 2);
  EXPECT_TRUE(found) << lines[1].dump();
}

TEST_F(Cli, WeightsFileChangesTotals) {
  ASSERT_EQ(run({"fit-limits", path("corpus.json"), "-o", path("limits.json"), "--quantile", "0.2"})
                .code,
            0);
  write(dir / "w.json", R"({"bone_length": 2.0, "root_bone": 0.0, "angle": 0.0})");
  const Outcome eval = run({"evaluate", path("corpus.json"), "--limits", path("limits.json"),
                            "--weights", path("w.json")});
  const LimitSet limits = load_limits(path("limits.json"));
  LossWeights w;
  w.bone_length = 2.0;
  w.root_bone = 0.0;
  w.angle = 0.0;
  const auto lines = eval.lines();
  for (std::size_t s = 0; s < lines.size(); ++s) {
    EXPECT_EQ(lines[s]["total"].get<double>(), bmc_loss(corpus[s], limits, w).total);
  }
}

TEST_F(Cli, LenientFitWarnsAboutSkippedSamples) {
  auto poses = corpus;
  Joints<double> j = poses[2].joints();
  j[mcp_joint(2)] = j[0] + 1.2 * (j[mcp_joint(1)] - j[0]);
  poses[2] = HandPose(j);
  save_poses(poses, dir / "mixed.json");
  EXPECT_EQ(run({"fit-limits", path("mixed.json"), "-o", path("l.json")}).code, 2);
  const Outcome lenient = run({"fit-limits", path("mixed.json"), "-o", path("l.json"), "--lenient"});
  ASSERT_EQ(lenient.code, 0);
  EXPECT_NE(lenient.err.find("skipped degenerate sample 2"), std::string::npos);
  EXPECT_EQ(lenient.lines().at(0)["skipped"], json::array({2}));
}

TEST_F(Cli, InputErrorsExitTwo) {
  write(dir / "broken.json", "{\"poses\": [[[0, 0]]]}");
  const Outcome bad = run({"fit-limits", path("broken.json"), "-o", path("l.json")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("poses[0]"), std::string::npos);
  EXPECT_EQ(run({"evaluate", path("corpus.json"), "--limits", path("nope.json")}).code, 2);
  EXPECT_EQ(run({"evaluate", path("corpus.json")}).code, 2);
  EXPECT_EQ(run({"no-such-command"}).code, 2);
  EXPECT_EQ(run({"fit-limits", path("corpus.json"), "-o", path("l.json"), "--quantile", "abc"}).code,
            2);
  write(dir / "limits_bad.json", "{\"version\": 1}");
  const Outcome schema = run({"evaluate", path("corpus.json"), "--limits", path("limits_bad.json")});
  EXPECT_EQ(schema.code, 2);
  EXPECT_NE(schema.err.find("metadata"), std::string::npos);
}

TEST_F(Cli, HelpExitsZero) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"evaluate", "--help"}).code, 0);
}

TEST_F(Cli, ConfigFileFillsUnsetFlagsAndFlagsWin) {
  write(dir / "cfg.json", json{{"input", path("corpus.json")},
                               {"out", path("from_config.json")},
                               {"quantile", 0.25},
                               {"source", "configured"}}
                              .dump());
  ASSERT_EQ(run({"fit-limits", "--config", path("cfg.json")}).code, 0);
  EXPECT_EQ(load_limits(path("from_config.json")).metadata.source, "configured");

  ASSERT_EQ(run({"fit-limits", "--config", path("cfg.json"), "--source", "flag", "--quantile",
                 "0", "-o", path("from_flag.json")})
                .code,
            0);
  const LimitSet flagged = load_limits(path("from_flag.json"));
  EXPECT_EQ(flagged.metadata.source, "flag");
  // Quantile 0 from the flag: the corpus is feasible.
  for (const HandPose& p : corpus) EXPECT_LE(bmc_value(p, flagged, LossWeights{}), 1e-12);
}

TEST_F(Cli, ProjectWritesFeasiblePoses) {
  ASSERT_EQ(run({"fit-limits", path("corpus.json"), "-o", path("limits.json")}).code, 0);
  oracle::Rng rng(72);
  std::vector<HandPose> noisy;
  for (int i = 0; i < 3; ++i) noisy.push_back(perturb_pose(corpus[static_cast<std::size_t>(i)], 0.001, rng));
  save_poses(noisy, dir / "noisy.json");
  const Outcome r = run({"project", path("noisy.json"), "--limits", path("limits.json"), "-o",
                         path("projected.json")});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  const LimitSet limits = load_limits(path("limits.json"));
  for (const HandPose& p : load_poses(path("projected.json"))) {
    EXPECT_LT(bmc_value(p, limits, LossWeights{}), 1e-6);
  }
  for (const json& line : r.lines()) {
    EXPECT_TRUE(line["converged"].get<bool>());
    EXPECT_LE(line["final"]["total"].get<double>(), line["initial"].get<double>());
  }
  const Outcome capped = run({"project", path("noisy.json"), "--limits", path("limits.json"),
                              "--max-iterations", "0", "--threshold", "0"});
  EXPECT_EQ(capped.code, 3);
}

TEST_F(Cli, SolveDepth) {
  const CameraIntrinsics cam = CameraIntrinsics::from_focal(600, 600, 320, 240);
  Eigen::Matrix3d r;
  r = Eigen::AngleAxisd(-1.2, Eigen::Vector3d::UnitX());
  const HandPose pose =
      oracle::transform(fixtures::sample_pose(), r, Eigen::Vector3d(0.0, 0.0, 0.6));
  const Decomposition d = decompose_25d(pose, cam);
  TwoPointFiveD broken = d.data;
  broken.uv[9] = broken.uv[0];
  write(dir / "s.json",
        json{{"samples", json::array({sample_25d_to_json(d.data), sample_25d_to_json(broken)})}}
            .dump());
  const Outcome out = run({"solve-depth", path("s.json"), "--camera", "600", "0", "320", "0",
                           "600", "240", "0", "0", "1"});
  EXPECT_EQ(out.code, 3);
  const auto lines = out.lines();
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_NEAR(lines[0]["zroot"].get<double>(), pose[0].z / d.scale, 1e-9);
  EXPECT_EQ(lines[1]["error"], "DegenerateReference");

  write(dir / "one.json", json::array({sample_25d_to_json(d.data)}).dump());
  EXPECT_EQ(run({"solve-depth", path("one.json"), "--camera", "600", "0", "320", "0", "600", "240",
                 "0", "0", "1"})
                .code,
            0);
  EXPECT_EQ(run({"solve-depth", path("one.json")}).code, 2);
}

TEST_F(Cli, GradCheckIsDeterministicAndTheFaultyHookExitsOne) {
  const Outcome a = run({"grad-check", "--samples", "15", "--seed", "5"});
  const Outcome b = run({"grad-check", "--samples", "15", "--seed", "5"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(a.lines().at(0)["passed"].get<bool>());

  cli::Hooks faulty;
  faulty.gradient_hook = [](Joints<double>& g) { g[5].y *= 1.5; };
  const Outcome bad = run({"grad-check", "--samples", "15"}, faulty);
  EXPECT_EQ(bad.code, 1);
  EXPECT_FALSE(bad.lines().at(0)["passed"].get<bool>());
}
