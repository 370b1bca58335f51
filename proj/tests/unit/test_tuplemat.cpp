#include "generators.hpp"
#include "lanedit/errors.hpp"
#include "lanedit/oracles.hpp"
#include "lanedit/tuplemat.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

using namespace lanedit;

namespace {

ScoredGrammar random_scored(testgen::Rng& rng, std::size_t nts) {
  Grammar cnf = testgen::random_cnf(rng, nts, 2);
  ScoredGrammar plain = scored_from_cnf(cnf);
  ScoredGrammar ge(cnf);
  for (ScoredProduction p : plain.productions()) {
    p.score = static_cast<double>(rng() % 3);
    ge.add(p);
  }
  return ge;
}

TupleMatrix random_tuples(testgen::Rng& rng, std::size_t rows, std::size_t cols, std::size_t nts) {
  TupleMatrix m(rows, cols, 1e9);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t e = rng() % 3; e > 0; --e)
        m.cell(i, j).offer(TupleEntry{static_cast<NonterminalId>(rng() % nts), static_cast<double>(rng() % 5), {}});
  return m;
}

// Best score per nonterminal, written out over every (k, A, B, rule).
std::map<NonterminalId, double> direct_cell(const TupleMatrix& a, const TupleMatrix& b, std::size_t i, std::size_t j,
                                            const ScoredGrammar& ge, double cap) {
  std::map<NonterminalId, double> out;
  for (std::size_t k = 0; k < a.cols(); ++k)
    for (const TupleEntry& x : a.cell(i, k))
      for (const TupleEntry& y : b.cell(k, j))
        for (const ScoredProduction& p : ge.productions()) {
          if (!p.production.is_binary()) continue;
          if (p.production.rhs[0].id != x.nt || p.production.rhs[1].id != y.nt) continue;
          double s = x.score + y.score + p.score;
          if (s > cap) continue;
          auto it = out.find(p.production.lhs);
          if (it == out.end() || s < it->second) out[p.production.lhs] = s;
        }
  return out;
}

}  // namespace

TEST(TupleCell, OfferKeepsMinimumPerNonterminal) {
  TupleCell c;
  EXPECT_TRUE(c.offer({2, 5, {}}));
  EXPECT_TRUE(c.offer({1, 7, {}}));
  EXPECT_FALSE(c.offer({2, 6, {}}));
  EXPECT_TRUE(c.offer({2, 3, {}}));
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.begin()->nt, 1u);
  EXPECT_EQ(c.find(2)->score, 3.0);
  c.erase_above(5);
  EXPECT_EQ(c.size(), 1u);
}

TEST(TupleCell, TieBreakPrefersLowerProduction) {
  TupleEntry a{0, 1, {Backpointer::Kind::binary, 4, 2, 0, 1}};
  TupleEntry b{0, 1, {Backpointer::Kind::binary, 3, 5, 0, 1}};
  EXPECT_TRUE(better_entry(b, a));
  EXPECT_FALSE(better_entry(a, b));
}

TEST(OpR, ScoresAndCap) {
  ScoredGrammar ge(parse_grammar_text("S -> A B\nS -> B A\nA -> a\nB -> b\n"));
  ge.add(ScoredProduction{ge.base().productions()[0], 2, RuleKind::original, std::nullopt});
  auto r = op_r({1, 1.5}, {2, 1}, ge, 10);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0], std::make_pair(NonterminalId{0}, 4.5));
  EXPECT_TRUE(op_r({1, 1.5}, {2, 1}, ge, 4).empty());
  EXPECT_TRUE(op_r({2, 0}, {2, 0}, ge, 10).empty());
}

TEST(MatrixMult, MatchesDirectEnumeration) {
  testgen::Rng rng(21);
  for (int it = 0; it < 60; ++it) {
    const std::size_t nts = 2 + rng() % 4;
    ScoredGrammar ge = random_scored(rng, nts);
    const std::size_t r = 1 + rng() % 4, k = 1 + rng() % 4, c = 1 + rng() % 4;
    TupleMatrix a = random_tuples(rng, r, k, nts), b = random_tuples(rng, k, c, nts);
    const double cap = static_cast<double>(3 + rng() % 8);
    TupleMatrix m = matrix_mult(a, b, ge, cap);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        auto want = direct_cell(a, b, i, j, ge, cap);
        ASSERT_EQ(m.cell(i, j).size(), want.size());
        for (const TupleEntry& e : m.cell(i, j)) EXPECT_EQ(e.score, want.at(e.nt));
      }
  }
}

TEST(MatrixMult, BackendsAgreeIncludingBackpointers) {
  testgen::Rng rng(22);
  for (int it = 0; it < 60; ++it) {
    const std::size_t nts = 2 + rng() % 4;
    ScoredGrammar ge = random_scored(rng, nts);
    const std::size_t n = 1 + rng() % 6;
    TupleMatrix a = random_tuples(rng, n, n, nts), b = random_tuples(rng, n, n, nts);
    ProductOptions o;
    TupleMatrix ref = matrix_mult(a, b, ge, 9, o);
    for (Backend be : {Backend::boolean, Backend::bigint})
      for (bool sidon : {false, true}) {
        o.backend = be;
        o.use_sidon = sidon;
        EXPECT_EQ(matrix_mult(a, b, ge, 9, o), ref) << to_string(be) << " sidon " << sidon;
      }
  }
}

TEST(MatrixMult, ShapeAndCapacityErrors) {
  ScoredGrammar ge = scored_from_cnf(parse_grammar_text("S -> S S\nS -> a\n"));
  TupleMatrix a(2, 3, 5), b(2, 2, 5);
  EXPECT_THROW(matrix_mult(a, b, ge, 5), InvalidArgument);
  TupleMatrix c(3, 3, 5), d(3, 3, 5);
  c.cell(0, 1).offer({0, 1, {}});
  d.cell(1, 2).offer({0, 1, {}});
  ProductOptions o;
  o.backend = Backend::boolean;
  o.max_expanded_dim = 2;
  EXPECT_THROW(matrix_mult(c, d, ge, 5, o), CapacityError);
}

TEST(MatrixMult, CombineHookReplacesRuleScore) {
  ScoredGrammar ge(parse_grammar_text("S -> S S\nS -> a\n"));
  ge.add(ScoredProduction{ge.base().productions()[0], 1, RuleKind::original, std::nullopt});
  TupleMatrix a(1, 1, 100), b(1, 1, 100);
  a.cell(0, 0).offer({0, 2, {}});
  b.cell(0, 0).offer({0, 3, {}});
  ProductOptions o;
  o.combine = [](std::size_t, std::size_t, ProductionIndex, double pair) { return 10 * pair; };
  EXPECT_EQ(matrix_mult(a, b, ge, 100, o).cell(0, 0).find(0)->score, 50.0);
  EXPECT_EQ(matrix_mult(a, b, ge, 100).cell(0, 0).find(0)->score, 6.0);
}

TEST(DistanceProduct, BigintMatchesNaive) {
  testgen::Rng rng(23);
  for (int it = 0; it < 40; ++it) {
    const std::size_t m = 1 + rng() % 6;
    IntMatrix a = testgen::random_int_matrix(rng, m, 0, 9), b = testgen::random_int_matrix(rng, m, 0, 9);
    if (it % 3 == 0) a(0, 0) = std::nullopt;
    DistanceProduct p = distance_product_bigint(a, b, 9);
    EXPECT_EQ(p.min_sum, oracle::min_plus_naive(a, b));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        std::set<std::int64_t> sums;
        for (std::size_t k = 0; k < m; ++k)
          if (a(i, k) && b(k, j)) sums.insert(*a(i, k) + *b(k, j));
        EXPECT_EQ(p.all_sums(i, j), std::vector<std::int64_t>(sums.begin(), sums.end()));
      }
  }
  IntMatrix a(1, 1, std::int64_t{11});
  EXPECT_THROW(distance_product_bigint(a, a, 9), InvalidArgument);
  EXPECT_THROW(distance_product_bigint(a, a, 11, 8), CapacityError);
}

TEST(BooleanBackend, RejectsUndeclaredScore) {
  ScoredGrammar ge = scored_from_cnf(parse_grammar_text("S -> S S\nS -> a\n"));
  TupleMatrix a(1, 1, 10);
  a.cell(0, 0).offer({0, 2, {}});
  EXPECT_THROW(tuple_product_boolean(a, a, ge, {0, 1}, 10), InvalidArgument);
  EXPECT_EQ(tuple_product_boolean(a, a, ge, {2}, 10).cell(0, 0).find(0)->score, 4.0);
}

TEST(Replay, RebuildsDerivationScore) {
  Grammar cnf = to_cnf(parse_grammar_text("S -> A B\nA -> a\nB -> b\n"));
  ScoredGrammar ge = scored_from_cnf(cnf);
  TerminalString s = encode_string_strict(cnf, "ab");
  TupleMatrix m = string_matrix(s, ge, 10);
  m.cell(0, 2) = matrix_mult(m.block(0, 1, 1, 2), m.block(1, 2, 2, 3), ge, 10,
                             ProductOptions{Backend::naive, false, 1u << 14, 1'000'000, 0, 1, 2, {}})
                     .cell(0, 0);
  Derivation d = replay(m, ge, nullptr, 0, 2, cnf.start());
  EXPECT_EQ(d.nodes.size(), 3u);
  EXPECT_EQ(d.score, 0.0);
  EXPECT_EQ(derivation_score(d, ge), 0.0);
  EXPECT_THROW(replay(m, ge, nullptr, 0, 1, cnf.start()), InvalidArgument);
}
