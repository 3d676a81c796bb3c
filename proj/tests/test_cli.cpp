#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string out;
};

// Runs the CLI with stderr folded into stdout.
Result cli(const std::string& args) {
  const std::string cmd = std::string(CHROMDEV_CLI) + " " + args + " 2>&1";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), buf.size(), p)) r.out += buf.data();
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("chromdev_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli("").status, 2);
  EXPECT_EQ(cli("frobnicate").status, 2);
  EXPECT_EQ(cli("doe --design plackett").status, 2);
  EXPECT_EQ(cli("--help").status, 0);
}

TEST(Cli, DoeEmitsCaseStudyDesign) {
  const auto r = cli("doe --dummy 2 --centers 3");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(line_count(r.out), 21u);
  EXPECT_EQ(r.out.rfind("run,X1,X2,X3,X4,X5,X6,role,batch\n", 0), 0u);
  const auto generic = cli("doe --factors 4");
  ASSERT_EQ(generic.status, 0);
  EXPECT_EQ(line_count(generic.out), 10u);
  EXPECT_EQ(cli("doe --factors 30").status, 1);
}

TEST(Cli, RunFitOptimizeDspaceValidate) {
  const auto dir = scratch("pipeline");
  const auto d = (dir / "d.csv").string();
  ASSERT_EQ(cli("doe --dummy 2 --centers 3 -o " + d).status, 0);
  const auto rec = (dir / "r.jsonl").string();
  auto r = cli("run --design " + d + " --batches 250402,250403,250404,250405 -o " + rec);
  ASSERT_EQ(r.status, 0) << r.out;
  const auto models = (dir / "m").string();
  r = cli("fit --records " + rec + " -o " + models);
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir / "m" / "Y4.txt"));
  r = cli("optimize --models " + models + " --batch 250401 --population 40 --generations 10");
  if (r.status == 0) {
    EXPECT_EQ(r.out.rfind("X1,X2,X3,X4,X5,X6,Y1,Y2,Y3,Y4,feasible\n", 0), 0u);
  } else {
    EXPECT_NE(r.out.find("NoFeasibleSolution"), std::string::npos) << r.out;
  }
  r = cli("dspace --models " + models + " --batch 250401 --point 1,1.5,2,1,3,1 --resolution 4");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(line_count(r.out), 17u);
  r = cli("validate --models " + models + " --batch 250401 --point 1,1.5,2,1,3,1");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("position,"), std::string::npos);
  EXPECT_EQ(cli("validate --models " + models + " --batch 999 --point 1,1.5,2,1,3,1").status, 1);
}

TEST(Cli, UnsatisfiableOptimizationExitsOne) {
  const auto dir = scratch("infeasible");
  const auto d = (dir / "d.csv").string();
  ASSERT_EQ(cli("doe --dummy 2 --centers 3 -o " + d).status, 0);
  ASSERT_EQ(cli("run --design " + d + " --batches 250402,250403 -o " + (dir / "r.jsonl").string()).status, 0);
  ASSERT_EQ(cli("fit --records " + (dir / "r.jsonl").string() + " -o " + (dir / "m").string()).status, 0);
  std::ofstream(dir / "c.json") << R"({"schema_version": 1, "campaign": {"constraints": {"Y1": 1000}}})";
  const auto r = cli("optimize --models " + (dir / "m").string() + " --batch 250401 --config " +
                     (dir / "c.json").string() + " --population 20 --generations 5");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("chromdev: NoFeasibleSolution"), std::string::npos) << r.out;
}

TEST(Cli, DefaultConfigIsLoadable) {
  const auto dir = scratch("config");
  const auto path = (dir / "c.json").string();
  ASSERT_EQ(cli("default-config -o " + path).status, 0);
  std::ofstream(dir / "bad.json") << R"({"schema_version": 1, "oops": true})";
  const auto bad = cli("campaign --config " + (dir / "bad.json").string() + " -o " + dir.string());
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.out.find("ParseError"), std::string::npos);
}
