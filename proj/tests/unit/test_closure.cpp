#include "generators.hpp"
#include "lanedit/closure.hpp"
#include "lanedit/editdist.hpp"
#include "lanedit/errors.hpp"

#include <gtest/gtest.h>

using namespace lanedit;

namespace {

struct Case {
  LedContext ctx;
  TupleMatrix b;
  ClosureConfig cfg;
};

Case make_case(testgen::Rng& rng, std::size_t len) {
  Grammar g = testgen::random_cfg(rng, 4, 2);
  TerminalString s = testgen::random_string(rng, 2, len);
  Case c{make_led_context(g, s), {}, {}};
  c.cfg.cap = static_cast<double>(c.ctx.trivial_bound(0, s.size()));
  c.cfg.dn = &c.ctx.dn;
  c.b = string_matrix(c.ctx.s, c.ctx.ge, c.cfg.cap);
  return c;
}

}  // namespace

TEST(Closure, ValiantEqualsNaive) {
  testgen::Rng rng(31);
  for (int it = 0; it < 60; ++it) {
    Case c = make_case(rng, rng() % 12);
    for (std::size_t base : {2u, 3u, 8u}) {
      c.cfg.base_block = base;
      EXPECT_EQ(closure_naive(c.b, c.ctx.ge, c.cfg), closure_valiant(c.b, c.ctx.ge, c.cfg)) << "base " << base;
    }
  }
}

TEST(Closure, BackendsInsideClosureAgree) {
  testgen::Rng rng(32);
  for (int it = 0; it < 20; ++it) {
    Case c = make_case(rng, 3 + rng() % 8);
    TupleMatrix ref = closure_valiant(c.b, c.ctx.ge, c.cfg);
    for (Backend be : {Backend::boolean, Backend::bigint}) {
      c.cfg.product.backend = be;
      c.cfg.product.use_sidon = true;
      EXPECT_EQ(closure_valiant(c.b, c.ctx.ge, c.cfg), ref);
    }
  }
}

// A closed matrix is its own fixpoint: P(i,j) = ⋃_k P(i,k)·P(k,j), then D-saturation.
TEST(Closure, IsAFixpoint) {
  testgen::Rng rng(33);
  for (int it = 0; it < 20; ++it) {
    Case c = make_case(rng, 2 + rng() % 7);
    TupleMatrix p = closure_naive(c.b, c.ctx.ge, c.cfg);
    const std::size_t n = p.dim();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 2; j < n; ++j) {
        TupleCell cell = cell_product(p, i, j, {{i + 1, j}}, c.ctx.ge, c.cfg.cap);
        dn_saturate(cell, c.ctx.ge, c.ctx.dn, c.cfg.cap);
        EXPECT_TRUE(cell.same_scores(p.cell(i, j))) << i << "," << j;
      }
  }
}

TEST(Closure, ScoresNeverExceedCap) {
  testgen::Rng rng(34);
  Case c = make_case(rng, 10);
  c.cfg.cap = 2;
  TupleMatrix p = closure(c.b, c.ctx.ge, c.cfg);
  for (std::size_t i = 0; i < p.dim(); ++i)
    for (std::size_t j = 0; j < p.dim(); ++j)
      for (const TupleEntry& e : p.cell(i, j)) EXPECT_LE(e.score, 2.0);
}

TEST(Saturate, AddsEpsilonNeighbours) {
  Grammar cnf = to_cnf(parse_grammar_text("S -> A B\nA -> a\nB -> b\n"));
  ScoredGrammar ge = build_error_grammar(cnf, {0, 1});
  DeletionSet dn = deletion_set_final(ge, 4);
  TupleCell cell;
  cell.offer({*cnf.find_nonterminal("A"), 0, {}});
  EXPECT_GT(dn_saturate(cell, ge, dn, 10), 0u);
  ASSERT_TRUE(cell.find(cnf.start()));
  EXPECT_EQ(cell.find(cnf.start())->score, 1.0);
}

TEST(ClosurePlusPlus, NeedsRounding) {
  testgen::Rng rng(35);
  Case c = make_case(rng, 4);
  EXPECT_THROW(closure_plus_plus(c.b, c.ctx.ge, c.cfg), InvalidArgument);
}

TEST(ClosurePlusPlus, ScoresLieOnTheGrid) {
  testgen::Rng rng(36);
  Case c = make_case(rng, 8);
  LevelGrid grid(0.2, 2 * c.cfg.cap, 1);
  c.cfg.cap = grid.top();
  c.cfg.rounding = RoundingConfig{grid, 17, RoundingConfig::Style::led};
  TupleMatrix p = closure_plus_plus(c.b, c.ctx.ge, c.cfg);
  for (std::size_t i = 0; i < p.dim(); ++i)
    for (std::size_t j = 0; j < p.dim(); ++j)
      for (const TupleEntry& e : p.cell(i, j)) EXPECT_TRUE(grid.on_grid(e.score)) << e.score;
  EXPECT_EQ(p, closure_plus_plus(c.b, c.ctx.ge, c.cfg));
}

TEST(Closure, RejectsTinyBaseBlock) {
  testgen::Rng rng(38);
  Case c = make_case(rng, 4);
  c.cfg.base_block = 1;
  EXPECT_THROW(closure_valiant(c.b, c.ctx.ge, c.cfg), InvalidArgument);
}
