#include "generators.hpp"
#include "lanedit/errors.hpp"
#include "lanedit/oracles.hpp"
#include "lanedit/scfg.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lanedit;

TEST(ViterbiExact, MatchesTreeEnumeration) {
  testgen::Rng rng(51);
  for (int it = 0; it < 100; ++it) {
    Scfg g = make_scfg(testgen::random_scfg(rng, 1 + rng() % 4, 2));
    TerminalString s = testgen::random_string(rng, 2, 1 + rng() % 7);
    auto p = viterbi_exact(g, s);
    Rational want = oracle::parse_enum_oracle(g, s);
    if (want == 0) {
      EXPECT_FALSE(p);
      continue;
    }
    ASSERT_TRUE(p);
    EXPECT_EQ(p->probability, want);
    EXPECT_NEAR(p->score, -std::log2(static_cast<double>(want)), 1e-9);
    EXPECT_EQ(p->estimate, p->score);
  }
}

TEST(ViterbiExact, TreeIsConsistent) {
  testgen::Rng rng(52);
  for (int it = 0; it < 50; ++it) {
    Scfg g = make_scfg(testgen::random_scfg(rng, 3, 2));
    TerminalString s = testgen::random_string(rng, 2, 1 + rng() % 7);
    auto p = viterbi_exact(g, s);
    if (!p) continue;
    ASSERT_FALSE(p->steps.empty());
    EXPECT_EQ(p->steps[0].production.lhs, g.grammar.start());
    EXPECT_EQ(p->steps[0].begin, 0u);
    EXPECT_EQ(p->steps[0].end, s.size());
    Rational prod = 1;
    std::size_t leaves = 0;
    for (const ParseStep& st : p->steps) {
      prod *= *st.production.prob;
      if (st.production.is_terminal_rule()) {
        ++leaves;
        EXPECT_EQ(st.end, st.begin + 1);
        EXPECT_EQ(st.production.rhs[0].id, s[st.begin]);
      }
    }
    EXPECT_EQ(leaves, s.size());
    EXPECT_EQ(prod, p->probability);
  }
}

TEST(ViterbiExact, FixedGrammar) {
  Scfg g = make_scfg(parse_grammar_text("S -> A B [1/2]\nS -> B A [1/2]\nA -> a [3/4]\nA -> A A [1/4]\nB -> b [1]\n"));
  auto p = viterbi_exact(g, encode_string_strict(g.grammar, "aab"));
  ASSERT_TRUE(p);
  EXPECT_EQ(p->probability, Rational(9, 128));
  EXPECT_FALSE(viterbi_exact(g, encode_string_strict(g.grammar, "bb")));
}

TEST(ViterbiExact, UnknownSymbol) {
  Scfg g = make_scfg(parse_grammar_text("S -> a [1]\n"));
  EXPECT_THROW(viterbi_exact(g, {3}), UnknownSymbolError);
}

TEST(ScfgChart, BestPerSpan) {
  Scfg g = make_scfg(parse_grammar_text("S -> S S [1/3]\nS -> a [1/3]\nS -> b [1/3]\n"));
  TerminalString s = encode_string_strict(g.grammar, "abab");
  ScfgChart chart(g, s);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j <= 4; ++j) {
      auto p = chart.best(g.grammar.start(), i, j);
      ASSERT_TRUE(p);
      // (1/3)^(2L-1) for L leaves
      Rational want = 1;
      for (std::size_t k = 0; k < 2 * (j - i) - 1; ++k) want /= 3;
      EXPECT_EQ(p->probability, want);
    }
  EXPECT_THROW(chart.best(0, 2, 2), InvalidArgument);
}

TEST(ViterbiApprox, WithinFactor) {
  testgen::Rng rng(53);
  std::size_t good = 0, total = 0;
  for (int it = 0; it < 20; ++it) {
    Scfg g = make_scfg(testgen::random_scfg(rng, 3, 2));
    TerminalString s = testgen::random_string(rng, 2, 4 + rng() % 8);
    auto ex = viterbi_exact(g, s);
    ApproxOptions o;
    o.seed = static_cast<std::uint64_t>(it);
    ScfgApproxResult r = viterbi_approx(g, s, 0.5, o);
    EXPECT_EQ(r.parse.has_value(), ex.has_value());
    if (!ex) continue;
    ++total;
    good += r.parse->estimate >= 0.5 * ex->score - 1e-9 && r.parse->estimate <= 1.5 * ex->score + 1e-9;
    // the returned tree is a real parse, so its probability cannot beat the optimum
    EXPECT_LE(r.parse->probability, ex->probability);
  }
  EXPECT_GE(good + 1, total);
}

TEST(ViterbiApprox, DeterministicAcrossThreads) {
  Scfg g = make_scfg(parse_grammar_text("S -> S S [1/3]\nS -> a [1/3]\nS -> b [1/3]\n"));
  testgen::Rng rng(54);
  TerminalString s = testgen::random_string(rng, 2, 16);
  ApproxOptions o;
  o.seed = 4;
  ScfgApproxResult a = viterbi_approx(g, s, 0.5, o);
  o.threads = 4;
  ScfgApproxResult b = viterbi_approx(g, s, 0.5, o);
  EXPECT_EQ(a.values, b.values);
  ASSERT_TRUE(a.parse && b.parse);
  EXPECT_EQ(a.parse->estimate, b.parse->estimate);
  EXPECT_EQ(a.parse->probability, b.parse->probability);
  EXPECT_THROW(viterbi_approx(g, s, 0), InvalidArgument);
}
