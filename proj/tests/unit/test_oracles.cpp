#include "lanedit/oracles.hpp"

#include <gtest/gtest.h>

using namespace lanedit;

TEST(Oracles, MemberNaiveHandlesEpsilonAndUnitRules) {
  Grammar g = parse_grammar_text("S -> A\nA -> B A\nA -> EPS\nB -> b\nB -> S c\n");
  EXPECT_TRUE(oracle::member_naive(g, {}));
  TerminalId b = *g.find_terminal("b"), c = *g.find_terminal("c");
  EXPECT_TRUE(oracle::member_naive(g, {b, b}));
  EXPECT_TRUE(oracle::member_naive(g, {c}));
  EXPECT_TRUE(oracle::member_naive(g, {b, c, b}));
}

TEST(Oracles, LanguageUpTo) {
  Grammar g = parse_grammar_text("S -> a S b\nS -> EPS\n");
  auto lang = oracle::language_upto(g, 5);
  EXPECT_EQ(lang.size(), 3u);  // "", ab, aabb
  for (const auto& w : lang) EXPECT_TRUE(oracle::member_naive(g, w));
}

TEST(Oracles, EditBallRadius) {
  Grammar g = parse_grammar_text("S -> a b\n");
  EXPECT_EQ(oracle::led_enum_oracle(g, {0, 1}, 3), 0u);
  EXPECT_EQ(oracle::led_enum_oracle(g, {1, 0}, 3), 2u);
  EXPECT_EQ(oracle::led_enum_oracle(g, {}, 3), 2u);
  EXPECT_EQ(oracle::led_enum_oracle(g, {0, 0, 0, 0}, 1), std::nullopt);
}

TEST(Oracles, StringEditDistance) {
  EXPECT_EQ(oracle::string_edit_distance({0, 1, 2}, {0, 2}), 1u);
  EXPECT_EQ(oracle::string_edit_distance({}, {1, 1}), 2u);
  EXPECT_EQ(oracle::string_edit_distance({0, 1}, {1, 0}), 2u);
}

TEST(Oracles, ParseProbabilitiesListsEveryTree) {
  Scfg g{parse_grammar_text("S -> S S [1/2]\nS -> a [1/2]\n")};
  auto p = oracle::parse_probabilities(g, {0, 0, 0});
  ASSERT_EQ(p.size(), 1u);  // both trees have probability (1/2)^5
  EXPECT_EQ(*p.begin(), Rational(1, 32));
  EXPECT_EQ(oracle::parse_enum_oracle(g, {}), Rational(0));
}

TEST(Oracles, Products) {
  IntMatrix a(2, 2, std::nullopt), b(2, 2, std::nullopt);
  a(0, 0) = 1;
  a(0, 1) = 4;
  b(0, 1) = 2;
  b(1, 1) = 0;
  IntMatrix c = oracle::min_plus_naive(a, b);
  EXPECT_EQ(c(0, 1), 3);
  EXPECT_EQ(c(1, 1), std::nullopt);
  RationalMatrix x(1, 2), y(2, 1);
  x(0, 0) = Rational(1, 2);
  x(0, 1) = 3;
  y(0, 0) = 4;
  y(1, 0) = Rational(1, 2);
  EXPECT_EQ(oracle::min_times_naive(x, y)(0, 0), Rational(3, 2));
}

TEST(Oracles, TriangleNaive) {
  IntMatrix w(3, 3, std::nullopt);
  auto edge = [&](std::size_t i, std::size_t j, std::int64_t v) { w(i, j) = w(j, i) = v; };
  edge(0, 1, 1);
  edge(1, 2, 1);
  EXPECT_FALSE(oracle::triangle_naive(w));
  edge(0, 2, -3);
  EXPECT_TRUE(oracle::triangle_naive(w));
  edge(0, 2, -2);
  EXPECT_FALSE(oracle::triangle_naive(w));
}
