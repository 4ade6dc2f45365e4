#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

namespace fs = std::filesystem;

int RunCli(const std::string& args) {
  const std::string cmd = std::string(SDFLOC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sdfloc_cli_" + std::string(::testing::UnitTest::GetInstance()
                                            ->current_test_info()
                                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    std::ofstream(dir_ / "room.txt")
        << "voxel_size 0.05\nmax_distance 0.6\ninside_band 0.4\nnoise_sigma 0.005\n"
           "seed 2\nmatch_volume 0.05\n"
           "cavity 0 0 0 1.2 1.0 0.8\n"
           "box 0.5 0.3 -0.6 0.3 0.2 0.2 20 0 0\n"
           "sphere -0.5 -0.3 -0.5 0.25\n"
           "viewpoint a -0.1 0 0 0 0 0 0.8 0.8 0.6\n"
           "viewpoint b 0.1 0 0 10 0 0 0.8 0.8 0.6\n";
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(CliTest, SynthFeaturesEvaluate) {
  const fs::path out = dir_ / "synth";
  ASSERT_EQ(RunCli("synth " + (dir_ / "room.txt").string() + " -o " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "a.fsdf"));
  EXPECT_TRUE(fs::exists(out / "b.fsdf"));
  EXPECT_EQ(Slurp(out / "ground_truth.csv").substr(0, 28), "a,b,overlap_volume,is_match\n");

  const fs::path feat = dir_ / "features";
  ASSERT_EQ(RunCli("features " + (out / "a.fsdf").string() + " --max-keypoints 30 -o " +
                feat.string()),
            0);
  const std::string kp = Slurp(feat / "keypoints.csv");
  EXPECT_LE(std::count(kp.begin(), kp.end(), '\n'), 31);
  EXPECT_TRUE(fs::exists(feat / "descriptors.bin"));

  const fs::path eval = dir_ / "eval";
  ASSERT_EQ(RunCli("evaluate " + (out / "a.fsdf").string() + " " + (out / "b.fsdf").string() +
                " --k-dist 0.07 --iters 20000 --max-keypoints 300 --set knn=3 -o " +
                eval.string()),
            0);
  for (const char* f : {"pairs.csv", "pr.csv", "keypoints.csv", "config.txt"}) {
    EXPECT_TRUE(fs::exists(eval / f)) << f;
  }
  const std::string cfg = Slurp(eval / "config.txt");
  EXPECT_NE(cfg.find("k_dist = 0.07\n"), std::string::npos);
  EXPECT_NE(cfg.find("max_keypoints = 300\n"), std::string::npos);
  EXPECT_NE(cfg.find("knn = 3\n"), std::string::npos);
  EXPECT_NE(cfg.find("ransac_iterations = 20000\n"), std::string::npos);

  const fs::path eval2 = dir_ / "eval2";
  ASSERT_EQ(RunCli("evaluate --scene " + (dir_ / "room.txt").string() +
                " --k-dist 0.07 --iters 20000 --max-keypoints 300 --set knn=3 -o " +
                eval2.string()),
            0);
  EXPECT_EQ(Slurp(eval / "pairs.csv"), Slurp(eval2 / "pairs.csv"));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(RunCli(""), 2);
  EXPECT_EQ(RunCli("frobnicate"), 2);
  EXPECT_EQ(RunCli("synth"), 2);
  EXPECT_EQ(RunCli("synth " + (dir_ / "missing.txt").string() + " -o " + dir_.string()), 3);
  std::ofstream(dir_ / "bad.txt") << "spheroid 0 0 0 1\n";
  EXPECT_EQ(RunCli("synth " + (dir_ / "bad.txt").string() + " -o " + dir_.string()), 4);
  std::ofstream(dir_ / "garbage.fsdf") << "not an archive";
  EXPECT_EQ(RunCli("features " + (dir_ / "garbage.fsdf").string() + " -o " + dir_.string()), 4);
  EXPECT_EQ(RunCli("evaluate --scene " + (dir_ / "room.txt").string() + " -o " +
                (dir_ / "e").string()),
            2);  // no k_dist
  EXPECT_EQ(RunCli("evaluate --scene " + (dir_ / "room.txt").string() +
                " --k-dist 0.07 --set nonsense=1 -o " + (dir_ / "e").string()),
            4);
}

}  // namespace
