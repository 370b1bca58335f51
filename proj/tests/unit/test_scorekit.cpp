#include "lanedit/errors.hpp"
#include "lanedit/scorekit.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace lanedit;

TEST(LevelGrid, LevelsAreGeometric) {
  LevelGrid g(0.5, 10, 1);
  const auto& l = g.levels();
  ASSERT_EQ(l.front(), 0.0);
  EXPECT_DOUBLE_EQ(g.base(), 1.0);
  for (std::size_t r = 2; r < l.size(); ++r) EXPECT_DOUBLE_EQ(l[r] / l[r - 1], 1.5);
  EXPECT_GE(g.top(), 10.0);
  EXPECT_LT(l[l.size() - 2], 10.0);
  // ⌈log_1.5 10⌉ = 6
  EXPECT_EQ(g.exponent_count(), 7u);
}

TEST(LevelGrid, FloorAndCeil) {
  LevelGrid g(1.0, 100, 1);
  EXPECT_EQ(g.floor_level(5), 4.0);
  EXPECT_EQ(g.ceil_level(5), 8.0);
  EXPECT_EQ(g.floor_level(8), 8.0);
  EXPECT_EQ(g.ceil_level(8), 8.0);
  EXPECT_TRUE(g.on_grid(16));
  EXPECT_FALSE(g.on_grid(17));
  EXPECT_THROW(LevelGrid(0, 10), InvalidArgument);
}

TEST(Rounding, StaysAdjacentAndKeepsZero) {
  LevelGrid g(0.25, 50, 1);
  std::mt19937_64 rng(5);
  for (int it = 0; it < 2000; ++it) {
    double y = 50.0 * static_cast<double>(it) / 2000.0;
    double r = round_score(y, g, rng);
    if (y == 0) {
      EXPECT_EQ(r, 0.0);
      continue;
    }
    double yc = std::max(y, g.base());
    EXPECT_TRUE(r == g.floor_level(yc) || r == g.ceil_level(yc));
  }
  EXPECT_THROW(round_score(-1, g, 0.5), InvalidArgument);
  EXPECT_THROW(round_score(g.top() * 2, g, 0.5), InvalidArgument);
}

TEST(Rounding, UnbiasedWithMatchingVariance) {
  LevelGrid g(0.5, 100, 1);
  const double y = 7.3;
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int k = 0; k < n; ++k) {
    double r = round_score(y, g, keyed_uniform(99, 0, 0, static_cast<std::uint64_t>(k), 0));
    sum += r;
    sq += r * r;
  }
  const double mean = sum / n, var = sq / n - mean * mean;
  const double v = rounding_variance(y, g);
  EXPECT_NEAR(var, v, 0.05 * v);
  EXPECT_LT(std::abs(mean - y), 4 * std::sqrt(v / n));
  EXPECT_EQ(rounding_variance(g.floor_level(y), g), 0.0);
}

TEST(Rounding, KeyedUniformIsPure) {
  EXPECT_EQ(keyed_uniform(1, 2, 3, 4, 5), keyed_uniform(1, 2, 3, 4, 5));
  EXPECT_NE(keyed_uniform(1, 2, 3, 4, 5), keyed_uniform(1, 2, 3, 4, 6));
  for (std::uint64_t k = 0; k < 1000; ++k) {
    double u = keyed_uniform(k, k, 0, 0, 0);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

namespace {

bool sidon_ok(const std::vector<std::uint64_t>& g) {
  std::set<std::uint64_t> sums;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i; j < g.size(); ++j)
      if (!sums.insert(g[i] + g[j]).second) return false;
  return std::is_sorted(g.begin(), g.end()) && std::adjacent_find(g.begin(), g.end()) == g.end();
}

}  // namespace

TEST(Sidon, GreedyStartsWithMianChowla) {
  EXPECT_EQ(sidon_sequence(8, SidonMethod::greedy),
            (std::vector<std::uint64_t>{1, 2, 4, 8, 13, 21, 31, 45}));
}

TEST(Sidon, BothMethodsAreSidon) {
  for (std::size_t r : {1u, 2u, 3u, 10u, 50u, 200u}) {
    EXPECT_TRUE(sidon_ok(sidon_sequence(r, SidonMethod::greedy))) << r;
    auto et = sidon_sequence(r, SidonMethod::erdos_turan);
    EXPECT_EQ(et.size(), r);
    EXPECT_TRUE(sidon_ok(et)) << r;
    EXPECT_LE(et.back(), 3 * r * r) << r;
  }
  EXPECT_THROW(sidon_sequence(0), InvalidArgument);
}

TEST(Sidon, MapDecodesEverySum) {
  SidonMap m({0.5, 3, 7.25, 9, 11});
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i; j < m.size(); ++j) {
      auto d = m.decompose_sum(m.codes()[i] + m.codes()[j]);
      ASSERT_TRUE(d);
      EXPECT_EQ(*d, std::make_pair(i + 1, j + 1));
    }
  EXPECT_FALSE(m.decompose_sum(0));
  EXPECT_EQ(m.index_of(7.25), 2u);
  EXPECT_THROW(m.index_of(8), InvalidArgument);
}
