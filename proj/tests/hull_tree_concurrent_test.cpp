#include <atomic>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "dynhull/hull_tree.hpp"
#include "dynhull/oracle.hpp"
#include "dynhull/workload.hpp"

namespace dynhull {
namespace {

using bench::StressReport;
using bench::StressSpec;

class ConcurrentTest : public ::testing::TestWithParam<Strategy> {};

StressSpec small_spec(Strategy s, std::uint64_t seed) {
  StressSpec spec;
  spec.strategy = s;
  spec.distribution = bench::Distribution::annulus(seed);
  spec.writer_threads = 8;
  spec.ops_per_writer = 10000;
  spec.prepopulation = 512;
  spec.timeout_seconds = 120;
  return spec;
}

TEST_P(ConcurrentTest, MixedWritersLeaveOracleHull) {
  const StressReport r = bench::run_stress(small_spec(GetParam(), 41));
  EXPECT_TRUE(r.audit_ok) << r.audit_message;
  EXPECT_EQ(r.writer_ops, 80000u);
  EXPECT_EQ(r.stats.order_violations, 0u);
}

TEST_P(ConcurrentTest, SquareDistributionWithReads) {
  StressSpec spec = small_spec(GetParam(), 42);
  spec.distribution = bench::Distribution::square(42);
  spec.mix = {20, 50, 30};
  const StressReport r = bench::run_stress(spec);
  EXPECT_TRUE(r.audit_ok) << r.audit_message;
}

TEST_P(ConcurrentTest, RetryReadersAlwaysSeeConsistentHulls) {
  StressSpec spec = small_spec(GetParam(), 43);
  spec.reader_threads = 2;
  spec.reader_mode = ReadMode::RetryUntilConsistent;
  const StressReport r = bench::run_stress(spec);
  EXPECT_TRUE(r.audit_ok) << r.audit_message;
  EXPECT_GT(r.reads, 0u);
  EXPECT_EQ(r.inconsistent_reads, 0u);
}

TEST_P(ConcurrentTest, ConvexifyReadersAlwaysSeeConsistentHulls) {
  StressSpec spec = small_spec(GetParam(), 44);
  spec.reader_threads = 2;
  spec.reader_mode = ReadMode::Convexify;
  const StressReport r = bench::run_stress(spec);
  EXPECT_TRUE(r.audit_ok) << r.audit_message;
  EXPECT_EQ(r.inconsistent_reads, 0u);
}

TEST_P(ConcurrentTest, DeletionFlagsNeverClear) {
  StressSpec spec = small_spec(GetParam(), 45);
  spec.observe_deletions = true;
  const StressReport r = bench::run_stress(spec);
  EXPECT_TRUE(r.audit_ok) << r.audit_message;
  EXPECT_EQ(r.deletion_regressions, 0u);
}

// Every thread inserts and then deletes its own points; the tree must end
// empty and must never lose a point owned by another thread.
TEST_P(ConcurrentTest, DrainToEmpty) {
  HullTree tree(GetParam());
  const auto pts = bench::sample(bench::Distribution::circle(46), 8 * 2000);
  std::vector<std::thread> threads;
  std::atomic<int> failures{0};
  for (unsigned t = 0; t < 8; ++t)
    threads.emplace_back([&, t] {
      for (std::size_t i = t; i < pts.size(); i += 8)
        if (!tree.insert(pts[i])) ++failures;
      for (std::size_t i = t; i < pts.size(); i += 8)
        if (!tree.erase(pts[i])) ++failures;
    });
  for (auto& th : threads) th.join();
  EXPECT_EQ(failures.load(), 0);
  EXPECT_TRUE(tree.empty());
  EXPECT_TRUE(tree.get_hull().empty());
}

INSTANTIATE_TEST_SUITE_P(AllStrategies, ConcurrentTest,
                         ::testing::Values(Strategy::Coarse, Strategy::Fine, Strategy::Finer),
                         [](const auto& info) { return std::string(to_string(info.param)); });

}  // namespace
}  // namespace dynhull
