#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <filesystem>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("chenlee_cli_") + info->name() + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunResult run(const std::string& args) {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd =
        std::string(CLI_BINARY) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path sub(const std::string& name) { return dir_ / name; }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, HelpExitsCleanly) {
  const auto r = run("--help");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("simulate"), std::string::npos);
  EXPECT_NE(r.out.find("inflation-scan"), std::string::npos);
}

TEST_F(CliTest, MissingCommandIsAPreconditionFailure) {
  const auto r = run("--seed 3");
  EXPECT_EQ(r.exit_code, 2);
}

TEST_F(CliTest, UnknownFlagIsRejectedByName) {
  const auto r = run("simulate --frobnicate 1");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("--frobnicate"), std::string::npos);
}

TEST_F(CliTest, UnknownConfigKeyIsRejectedByName) {
  const auto r = run("simulate --set bogus=1 --output " + sub("o").string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("bogus"), std::string::npos);
}

TEST_F(CliTest, PicardRejectsSupercriticalRegularityByRange) {
  const auto r = run("picard --s=-0.6 --output " + sub("o").string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("s > -0.5"), std::string::npos);
}

TEST_F(CliTest, ZeroDataSimulationProducesZeroTrajectory) {
  const auto r = run("simulate --set initial=zero --set normalize=false --set K=8 "
                     "--set n_steps=20 --set T=0.5 --output " +
                     sub("o").string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  ASSERT_TRUE(fs::exists(sub("o/final.field")));
  ASSERT_TRUE(fs::exists(sub("o/energy.csv")));
  ASSERT_TRUE(fs::exists(sub("o/resolved_config.cfg")));
  // every listed coefficient is exactly zero
  std::ifstream in(sub("o/final.field"));
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long k;
    double re, im;
    ASSERT_TRUE(static_cast<bool>(ls >> k >> re >> im)) << line;
    EXPECT_EQ(re, 0.0);
    EXPECT_EQ(im, 0.0);
    ++rows;
  }
  EXPECT_EQ(rows, 17);  // modes -8..8
}

TEST_F(CliTest, FieldFileListsModesInAscendingOrder) {
  const auto r = run("simulate --set K=8 --set n_steps=20 --set T=0.5 --seed 5 --output " +
                     sub("o").string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  std::ifstream in(sub("o/final.field"));
  std::string line;
  long prev = -1000;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long k;
    double re, im;
    ASSERT_TRUE(static_cast<bool>(ls >> k >> re >> im)) << line;
    EXPECT_GT(k, prev);
    prev = k;
  }
  EXPECT_EQ(prev, 8);
}

TEST_F(CliTest, SimulationIsBitIdenticalPerSeed) {
  const std::string common =
      "simulate --set K=16 --set n_steps=50 --set T=0.5 ";
  ASSERT_EQ(run(common + "--seed 9 --output " + sub("a").string()).exit_code, 0);
  ASSERT_EQ(run(common + "--seed 9 --output " + sub("b").string()).exit_code, 0);
  ASSERT_EQ(run(common + "--seed 10 --output " + sub("c").string()).exit_code, 0);
  EXPECT_EQ(slurp(sub("a/final.field")), slurp(sub("b/final.field")));
  EXPECT_EQ(slurp(sub("a/report.json")), slurp(sub("b/report.json")));
  EXPECT_EQ(slurp(sub("a/energy.csv")), slurp(sub("b/energy.csv")));
  EXPECT_NE(slurp(sub("a/final.field")), slurp(sub("c/final.field")));
}

TEST_F(CliTest, PicardConvergesOnSmallData) {
  const auto r = run("picard --set K=16 --set n_steps=16 --set T=0.5 "
                     "--set amplitude=0.01 --seed 4 --output " +
                     sub("o").string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const std::string rep = slurp(sub("o/report.json"));
  EXPECT_NE(rep.find("\"converged\": true"), std::string::npos);
  EXPECT_TRUE(fs::exists(sub("o/final.field")));
}

TEST_F(CliTest, OracleCheckPassesAtDefaults) {
  const auto r = run("oracle-check");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST_F(CliTest, OracleCheckWritesReportWhenAskedTo) {
  const auto r = run("oracle-check --set N=4 --set t=0.25 --output " + sub("o").string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const std::string rep = slurp(sub("o/report.json"));
  EXPECT_NE(rep.find("max_abs_err"), std::string::npos);
}

TEST_F(CliTest, InflationScanSweepsDyadicResolutions) {
  // the sweep needs to run well past the small-N transient before the
  // fitted slope settles onto the predicted rate
  const auto r =
      run("inflation-scan --s=-1.5 --t=1 --N=16..1024 --output " + sub("o").string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  std::ifstream in(sub("o/scan.csv"));
  std::string line;
  int rows = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      EXPECT_NE(line.find("N"), std::string::npos);
      header_seen = true;
      continue;
    }
    ++rows;
  }
  EXPECT_EQ(rows, 7);  // 16, 32, ..., 1024
  const std::string rep = slurp(sub("o/report.json"));
  EXPECT_NE(rep.find("\"pass\": true"), std::string::npos);
}

TEST_F(CliTest, InflationScanRejectsMalformedRange) {
  const auto r = run("inflation-scan --N=16 --output " + sub("o").string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("range"), std::string::npos);
}

TEST_F(CliTest, EstimateCampaignPassesAndScaledConstantFails) {
  const std::string common = "verify-estimates --set checks=product --set product_samples=40 "
                             "--set product_a_values=2 --set product_r_values=1 ";
  const auto ok = run(common + "--output " + sub("a").string());
  ASSERT_EQ(ok.exit_code, 0) << ok.err;
  EXPECT_TRUE(fs::exists(sub("a/estimates.csv")));

  const auto bad =
      run(common + "--set product_bound_constant_scale=0.001 --output " + sub("b").string());
  EXPECT_EQ(bad.exit_code, 3);
  const std::string rep = slurp(sub("b/report.json"));
  EXPECT_NE(rep.find("\"pass\": false"), std::string::npos);
}

TEST_F(CliTest, RefusesToClobberNonEmptyOutputWithoutForce) {
  fs::create_directories(sub("o"));
  std::ofstream(sub("o/existing.txt")) << "x\n";
  const std::string args = "simulate --set K=8 --set n_steps=10 --set T=0.5 --output " +
                           sub("o").string();
  EXPECT_EQ(run(args).exit_code, 2);
  EXPECT_EQ(run(args + " --force").exit_code, 0);
}

TEST_F(CliTest, ConfigFileAndOverridesCompose) {
  std::ofstream(sub("base.cfg")) << "K=8\nn_steps=10\nT=0.5\n# comment\neta=2.0\n";
  const auto r = run("simulate --config " + sub("base.cfg").string() +
                     " --set eta=3.0 --output " + sub("o").string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const std::string cfg = slurp(sub("o/resolved_config.cfg"));
  EXPECT_NE(cfg.find("eta=3"), std::string::npos);  // override wins
  EXPECT_NE(cfg.find("K=8"), std::string::npos);
}

TEST_F(CliTest, MissingConfigFileIsAnIoFailure) {
  const auto r = run("simulate --config " + sub("nope.cfg").string() + " --output " +
                     sub("o").string());
  EXPECT_EQ(r.exit_code, 4);
}
