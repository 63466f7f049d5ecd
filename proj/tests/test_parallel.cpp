#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "diffspec/parallel.hpp"

using namespace diffspec;

TEST(Parallel, EachIndexRunsOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(0, hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, EmptyRangeIsNoop) {
  int calls = 0;
  parallel_for(5, 5, [&](std::size_t) { ++calls; });
  parallel_for(6, 5, [&](std::size_t) { ++calls; });
  EXPECT_EQ(calls, 0);
}

TEST(Parallel, RethrowsWorkerException) {
  EXPECT_THROW(parallel_for(0, 64,
                            [](std::size_t i) {
                              if (i == 17) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(Parallel, ThreadCountHonorsEnvironment) {
  ::setenv("DIFFSPEC_THREADS", "3", 1);
  EXPECT_EQ(thread_count(), 3u);
  ::setenv("DIFFSPEC_THREADS", "0", 1);
  EXPECT_GE(thread_count(), 1u);
  ::unsetenv("DIFFSPEC_THREADS");
  EXPECT_GE(thread_count(), 1u);
}

TEST(Parallel, ResultsIndependentOfWorkerCount) {
  std::vector<double> one(257), many(257);
  ::setenv("DIFFSPEC_THREADS", "1", 1);
  parallel_for(0, one.size(), [&](std::size_t i) { one[i] = static_cast<double>(i) * 0.5; });
  ::setenv("DIFFSPEC_THREADS", "4", 1);
  parallel_for(0, many.size(), [&](std::size_t i) { many[i] = static_cast<double>(i) * 0.5; });
  ::unsetenv("DIFFSPEC_THREADS");
  EXPECT_EQ(one, many);
}
