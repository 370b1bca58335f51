#include "generators.hpp"
#include "lanedit/editdist.hpp"
#include "lanedit/errors.hpp"
#include "lanedit/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lanedit;

namespace {

Grammar dyck() { return parse_grammar_text("S -> a S b S\nS -> EPS\n"); }

}  // namespace

TEST(LedExact, MatchesEditBallEnumeration) {
  testgen::Rng rng(41);
  for (int it = 0; it < 80; ++it) {
    Grammar g = testgen::random_cfg(rng, 4, 2);
    TerminalString s = testgen::random_string(rng, 3, rng() % 6);  // symbol 2 may be foreign
    ExactLed ex = led_exact_full(g, s);
    auto want = oracle::led_enum_oracle(g, s, ex.ctx.trivial_bound(0, s.size()));
    ASSERT_TRUE(want);
    EXPECT_EQ(ex.distance, *want) << g.to_text();
  }
}

TEST(LedExact, SubstringsMatchEnumeration) {
  testgen::Rng rng(42);
  for (int it = 0; it < 15; ++it) {
    Grammar g = testgen::random_cfg(rng, 3, 2);
    TerminalString s = testgen::random_string(rng, 2, 5);
    ExactLed ex = led_exact_full(g, s);
    for (std::size_t i = 0; i <= s.size(); ++i)
      for (std::size_t j = i; j <= s.size(); ++j) {
        TerminalString sub(s.begin() + static_cast<std::ptrdiff_t>(i), s.begin() + static_cast<std::ptrdiff_t>(j));
        EXPECT_EQ(ex.substring_distance(i, j), *oracle::led_enum_oracle(g, sub, ex.ctx.trivial_bound(i, j)));
      }
  }
}

TEST(LedExact, FixedValues) {
  Grammar g = dyck();
  auto d = [&](const char* text) { return led_exact(g, encode_string_strict(g, text)).distance; };
  EXPECT_EQ(d(""), 0u);
  EXPECT_EQ(d("ab"), 0u);
  EXPECT_EQ(d("a"), 1u);
  EXPECT_EQ(d("ba"), 2u);
  EXPECT_EQ(d("abba"), 2u);
  EXPECT_EQ(d("aaab"), 1u);
  EXPECT_EQ(d("bbbb"), 2u);
  EXPECT_EQ(d("bbbbb"), 3u);
  Grammar ab = parse_grammar_text("S -> a b S\nS -> a b\n");
  EXPECT_EQ(led_exact(ab, {}).distance, 2u);
}

TEST(LedExact, OptionsDoNotChangeTheAnswer) {
  testgen::Rng rng(43);
  for (int it = 0; it < 20; ++it) {
    Grammar g = testgen::random_cfg(rng, 4, 2);
    TerminalString s = testgen::random_string(rng, 2, rng() % 9);
    const std::size_t ref = led_exact(g, s).distance;
    LedOptions o;
    o.algorithm = ClosureAlgorithm::naive;
    EXPECT_EQ(led_exact(g, s, o).distance, ref);
    o.algorithm = ClosureAlgorithm::valiant;
    o.backend = Backend::bigint;
    o.use_sidon = true;
    EXPECT_EQ(led_exact(g, s, o).distance, ref);
  }
}

TEST(LedExact, EmptyLanguageThrows) {
  EXPECT_THROW(led_exact(parse_grammar_text("S -> a S\n"), {0}), EmptyLanguageError);
}

TEST(Script, ProducesAMemberAtTheReportedCost) {
  testgen::Rng rng(44);
  for (int it = 0; it < 80; ++it) {
    Grammar g = testgen::random_cfg(rng, 4, 2);
    TerminalString s = testgen::random_string(rng, 3, rng() % 8);
    LedResult r = led_exact(g, s);
    TerminalString out = apply_script(s, r.script);
    EXPECT_TRUE(oracle::member_naive(g, out));
    EXPECT_EQ(r.script.ops.size(), r.distance);
    EXPECT_EQ(oracle::string_edit_distance(s, out), r.distance);
    EXPECT_DOUBLE_EQ(r.script.cost, static_cast<double>(r.distance));
  }
}

TEST(Script, ApplyChecksPositions) {
  EditScript bad{{{EditOp::Kind::erase, 3, 0}}, 1};
  EXPECT_THROW(apply_script({0, 1}, bad), InvalidArgument);
  EditScript ok{{{EditOp::Kind::insert, 2, 5}, {EditOp::Kind::substitute, 0, 7}, {EditOp::Kind::erase, 1, 1}}, 3};
  EXPECT_EQ(apply_script({0, 1}, ok), (TerminalString{7, 5}));
}

TEST(Script, RetrievalTouchesFewCells) {
  Grammar g = dyck();
  testgen::Rng rng(45);
  TerminalString s = testgen::random_string(rng, 2, 40);
  ExactLed ex = led_exact_full(g, s);
  ScriptRetrieval r = retrieve_script_counted(ex.ctx, ex.closure, 0, s.size());
  EXPECT_LE(r.cells_touched, 4 * s.size());
  EXPECT_EQ(r.script.cost, static_cast<double>(ex.distance));
}

TEST(LedApprox, RunsAndSeeds) {
  EXPECT_EQ(median_runs(1), 1u);
  EXPECT_EQ(median_runs(2), 6u);
  EXPECT_EQ(median_runs(32), 30u);
  EXPECT_EQ(median_runs(33), 31u);
  EXPECT_NE(derive_run_seed(1, 0), derive_run_seed(1, 1));
  EXPECT_EQ(derive_run_seed(5, 3), derive_run_seed(5, 3));
}

TEST(LedApprox, WithinFactorOnSmallInputs) {
  testgen::Rng rng(46);
  std::size_t good = 0, total = 0;
  for (int it = 0; it < 30; ++it) {
    Grammar g = testgen::random_cfg(rng, 4, 2);
    TerminalString s = testgen::random_string(rng, 2, 4 + rng() % 10);
    ExactLed ex = led_exact_full(g, s);
    ApproxOptions o;
    o.seed = static_cast<std::uint64_t>(it);
    LocalEstimates est = led_approx(g, s, 0.5, o);
    EXPECT_GE(est.full(), static_cast<double>(ex.distance) - 1e-9);
    bool ok = true;
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j <= s.size(); ++j) {
        const double e = static_cast<double>(ex.substring_distance(i, j));
        ok = ok && est.at(i, j) >= 0.5 * e - 1e-9 && est.at(i, j) <= 1.5 * e + 1e-9;
        if (est.is_exact(i, j)) EXPECT_DOUBLE_EQ(est.at(i, j), e);
      }
    good += ok;
    ++total;
  }
  EXPECT_GE(good, total - 2);
}

TEST(LedApprox, DeterministicAcrossThreads) {
  Grammar g = dyck();
  testgen::Rng rng(47);
  TerminalString s = testgen::random_string(rng, 2, 24);
  ApproxOptions o;
  o.seed = 9;
  o.exact_cap = 2;
  LocalEstimates a = led_approx(g, s, 0.5, o);
  o.threads = 3;
  LocalEstimates b = led_approx(g, s, 0.5, o);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.script, b.script);
  EXPECT_EQ(a.median_run, b.median_run);
  EXPECT_EQ(a.run_seeds.size(), median_runs(24));
}

TEST(LedApprox, RejectsBadEps) {
  Grammar g = dyck();
  EXPECT_THROW(led_approx(g, {0, 1}, 0), InvalidArgument);
  EXPECT_THROW(led_approx(g, {0, 1}, 1.5), InvalidArgument);
}
