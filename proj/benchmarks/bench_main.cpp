#include "lanedit/closure.hpp"
#include "lanedit/editdist.hpp"
#include "lanedit/scfg.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace lanedit;

namespace {

Grammar dyck() { return parse_grammar_text("S -> a S b S\nS -> EPS\n"); }

TerminalString random_ab(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TerminalString s(n);
  for (auto& t : s) t = rng() & 1;
  return s;
}

void closure_bench(benchmark::State& state, ClosureAlgorithm alg, Backend be) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  LedContext ctx = make_led_context(dyck(), random_ab(n, 1));
  ClosureConfig cfg;
  cfg.cap = static_cast<double>(ctx.trivial_bound(0, n));
  cfg.dn = &ctx.dn;
  cfg.algorithm = alg;
  cfg.product.backend = be;
  cfg.product.use_sidon = be != Backend::naive;
  TupleMatrix b = string_matrix(ctx.s, ctx.ge, cfg.cap);
  for (auto _ : state) benchmark::DoNotOptimize(closure(b, ctx.ge, cfg));
  state.SetComplexityN(state.range(0));
}

void BM_ClosureNaive(benchmark::State& s) { closure_bench(s, ClosureAlgorithm::naive, Backend::naive); }
void BM_ClosureValiant(benchmark::State& s) { closure_bench(s, ClosureAlgorithm::valiant, Backend::naive); }
void BM_ClosureValiantBoolean(benchmark::State& s) { closure_bench(s, ClosureAlgorithm::valiant, Backend::boolean); }
void BM_ClosureValiantBigint(benchmark::State& s) { closure_bench(s, ClosureAlgorithm::valiant, Backend::bigint); }

void BM_LedExact(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Grammar g = dyck();
  TerminalString s = random_ab(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(led_exact(g, s));
  state.SetComplexityN(state.range(0));
}

void BM_LedApprox(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Grammar g = dyck();
  TerminalString s = random_ab(n, 3);
  ApproxOptions o;
  o.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(led_approx(g, s, 0.5, o));
}

void BM_ViterbiExact(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Scfg g = make_scfg(parse_grammar_text("S -> S S [1/3]\nS -> a [1/3]\nS -> b [1/3]\n"));
  TerminalString s = random_ab(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(viterbi_exact(g, s));
}

}  // namespace

BENCHMARK(BM_ClosureNaive)->RangeMultiplier(2)->Range(8, 64)->Complexity();
BENCHMARK(BM_ClosureValiant)->RangeMultiplier(2)->Range(8, 64)->Complexity();
BENCHMARK(BM_ClosureValiantBoolean)->RangeMultiplier(2)->Range(8, 32);
BENCHMARK(BM_ClosureValiantBigint)->RangeMultiplier(2)->Range(8, 32);
BENCHMARK(BM_LedExact)->RangeMultiplier(2)->Range(8, 64)->Complexity();
BENCHMARK(BM_LedApprox)->Arg(16)->Arg(32);
BENCHMARK(BM_ViterbiExact)->RangeMultiplier(2)->Range(8, 64);
BENCHMARK_MAIN();
