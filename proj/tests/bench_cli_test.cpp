#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "dynhull/geometry.hpp"

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args) {
  const std::string cmd = std::string(BENCH_EXE) + " " + args + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

class BenchCli : public ::testing::Test {
 protected:
  fs::path dir = fs::temp_directory_path() / ("bench_cli_" + std::to_string(::getpid()));
  void SetUp() override { fs::create_directories(dir); }
  void TearDown() override { fs::remove_all(dir); }
};

TEST_F(BenchCli, ThroughputWritesCsvAndPoints) {
  const auto csv = dir / "t.csv", pts = dir / "p.txt";
  ASSERT_EQ(run("throughput --strategy finer,coarse --mix 0,50,50 --dist annulus --threads 1,2 --warmup-s 0.01 "
                "--measure-s 0.05 --reps 2 --prepop 300 --seed 3 --out " + csv.string() + " --dump-points " + pts.string()),
            0);
  const std::string out = slurp(csv);
  EXPECT_EQ(out.rfind("strategy,mix,dist,threads,rep,ops_total,ops_per_sec,retries,early_stops\n", 0), 0u);
  EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 1 + 2 * 2 * 2);
  EXPECT_NE(out.find("finer,0/50/50,annulus,2,1,"), std::string::npos);
  std::ifstream in(pts);
  EXPECT_EQ(dynhull::read_points(in).size(), 300u);

  const auto csv2 = dir / "t2.csv";
  ASSERT_EQ(run("throughput --mix 90,9,1 --warmup-s 0.01 --measure-s 0.05 --reps 1 --points-file " + pts.string() +
                " --out " + csv2.string()),
            0);
  EXPECT_NE(slurp(csv2).find("finer,90/9/1,annulus,1,0,"), std::string::npos);
}

TEST_F(BenchCli, StaticWritesCsv) {
  const auto csv = dir / "s.csv", pts = dir / "s.txt";
  ASSERT_EQ(run("static --engine parallel,dynamic --dist circle --n 2000,3k --threads 2 --reps 2 --seed 5 --out " +
                csv.string()),
            0);
  const std::string out = slurp(csv);
  EXPECT_EQ(out.rfind("engine,dist,n,threads,rep,seconds,hull_size,oracle_match\n", 0), 0u);
  EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 1 + 2 * 2 * 2);
  EXPECT_EQ(out.find(",false\n"), std::string::npos);
  EXPECT_NE(out.find("dynamic,circle,3000,2,1,"), std::string::npos);

  {
    std::ofstream f(pts);
    f << "# square corners\n0 0\n10 0.001\n\n10.001 10\n-0.001 9.999\n";
  }
  const auto csv2 = dir / "s2.csv";
  ASSERT_EQ(run("static --engine dynamic --reps 1 --points-file " + pts.string() + " --out " + csv2.string()), 0);
  EXPECT_NE(slurp(csv2).find("dynamic,circle,4,1,0,"), std::string::npos);
  EXPECT_NE(slurp(csv2).find(",4,true\n"), std::string::npos);
}

TEST_F(BenchCli, RejectsBadArguments) {
  EXPECT_NE(run("throughput --mix 1,2,3 --out " + (dir / "x.csv").string()), 0);
  EXPECT_NE(run("throughput --strategy optimistic"), 0);
  EXPECT_NE(run("static --dist hexagon"), 0);
  EXPECT_NE(run("static --points-file " + (dir / "missing.txt").string()), 0);
  EXPECT_NE(run(""), 0);
}

}  // namespace
