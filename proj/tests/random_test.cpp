#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "wlsapprox/parallel.hpp"
#include "wlsapprox/random.hpp"
#include "wlsapprox/stats.hpp"

using namespace wlsapprox;

TEST(RandomStream, SameSeedSameSequence) {
  RandomStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_word(), b.next_word());
}

TEST(RandomStream, UniformInUnitInterval) {
  RandomStream s(1);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_LT(lo, 1e-3);
  EXPECT_GT(hi, 1.0 - 1e-3);
}

TEST(RandomStream, BelowIsUnbiased) {
  RandomStream s(9);
  std::vector<int> counts(7, 0);
  const int N = 70000;
  for (int i = 0; i < N; ++i) ++counts[s.below(7)];
  // Binomial(N, 1/7): sd ~ 92.6; 5 sigma band.
  for (int c : counts) EXPECT_NEAR(c, N / 7.0, 5 * 92.6);
}

TEST(RandomStream, NormalMoments) {
  RandomStream s(3);
  std::vector<double> v(200000);
  for (double& x : v) x = s.normal();
  const auto mom = moments(v);
  EXPECT_NEAR(mom.mean, 0.0, 5 * mom.std_err);
  EXPECT_NEAR(mom.std_dev, 1.0, 0.01);
}

TEST(RandomStream, SubstreamsAreDistinctAndReproducible) {
  const RandomStream base(123);
  std::set<std::uint64_t> seeds;
  for (std::uint64_t r = 0; r < 10000; ++r) seeds.insert(base.substream(r).seed());
  EXPECT_EQ(seeds.size(), 10000u);
  EXPECT_EQ(base.substream(17).seed(), RandomStream::substream_seed(123, 17));
  EXPECT_EQ(RandomStream::substream_seed(123, 17),
            mix64(123 ^ mix64(17 + 0x9e3779b97f4a7c15ULL)));
  EXPECT_NE(base.substream(0).seed(), base.seed());
}

TEST(Mix64, KnownSplitmixValue) {
  // mix64 adds the golden-ratio increment, so mix64(0) is the first output of
  // splitmix64 seeded with 0.
  EXPECT_EQ(mix64(0), 0xe220a8397b1dcdafULL);
}

TEST(CompensatedSum, RecoversCancelledTerms) {
  CompensatedSum s;
  s.add(1.0);
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  EXPECT_EQ(s.value(), 2.0);
}

TEST(Moments, MatchesDirectFormula) {
  const std::vector<double> v = {1, 2, 3, 4, 10};
  const auto m = moments(v);
  EXPECT_DOUBLE_EQ(m.mean, 4.0);
  const double var = (9 + 4 + 1 + 0 + 36) / 4.0;
  EXPECT_DOUBLE_EQ(m.std_dev, std::sqrt(var));
  EXPECT_DOUBLE_EQ(m.std_err, std::sqrt(var / 5.0));
  EXPECT_EQ(moments(std::vector<double>{}).count, 0u);
  EXPECT_EQ(moments(std::vector<double>{7.0}).std_err, 0.0);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (unsigned threads : {1u, 2u, 4u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), threads, [&](std::size_t i) { ++hits[i]; });
    for (auto& h : hits) ASSERT_EQ(h.load(), 1);
  }
}

TEST(ParallelFor, RethrowsSmallestFailingIndex) {
  for (unsigned threads : {1u, 3u}) {
    try {
      parallel_for(100, threads, [](std::size_t i) {
        if (i == 40 || i == 70) throw std::runtime_error(std::to_string(i));
      });
      FAIL() << "no exception";
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "40");
    }
  }
}
