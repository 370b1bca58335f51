#include "lanedit/scfg.hpp"

#include "lanedit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace lanedit {

double ScoredParse::reported_probability() const { return std::exp2(-estimate); }

ScoredParse parse_from_derivation(const ScoredGrammar& ge, const Derivation& d) {
  ScoredParse out;
  out.probability = 1;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const DerivationNode& node = d.nodes[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    const Production& p = ge[*node.production].production;
    out.steps.push_back(ParseStep{p, node.begin, node.end});
    if (p.prob) out.probability *= *p.prob;
    if (node.right >= 0) stack.push_back(node.right);
    if (node.left >= 0) stack.push_back(node.left);
  }
  out.score = derivation_score(d, ge);
  out.estimate = out.score;
  return out;
}

namespace {

ClosureConfig chart_config(const LedOptions* opts, double cap) {
  ClosureConfig cfg;
  cfg.cap = cap;
  if (opts) {
    cfg.algorithm = opts->algorithm;
    cfg.base_block = opts->base_block;
    cfg.product.backend = opts->backend;
    cfg.product.use_sidon = opts->use_sidon;
  }
  return cfg;
}

std::optional<ScoredParse> epsilon_parse(const Scfg& g) {
  for (const Production& p : g.grammar.productions())
    if (p.lhs == g.grammar.start() && p.is_epsilon()) {
      ScoredParse out;
      out.steps.push_back(ParseStep{p, 0, 0});
      out.probability = *p.prob;
      out.score = -log2_rational(*p.prob);
      if (out.score == 0) out.score = 0;
      out.estimate = out.score;
      return out;
    }
  return std::nullopt;
}

}  // namespace

ScfgChart::ScfgChart(const Scfg& g, const TerminalString& s, const LedOptions* opts)
    : ge_(scored_from_cnf(g.grammar, true)), n_(s.size()) {
  for (TerminalId t : s)
    if (t >= g.grammar.num_terminals()) throw UnknownSymbolError("symbol outside the grammar's terminals");
  m_ = closure(string_matrix(s, ge_, kInfinity), ge_, chart_config(opts, kInfinity));
}

std::optional<ScoredParse> ScfgChart::best(NonterminalId nt, std::size_t i, std::size_t j) const {
  if (i >= j || j > n_) throw InvalidArgument("bad span");
  if (!m_.cell(i, j).find(nt)) return std::nullopt;
  return parse_from_derivation(ge_, replay(m_, ge_, nullptr, i, j, nt));
}

std::optional<ScoredParse> viterbi_exact(const Scfg& g, const TerminalString& s) {
  if (s.empty()) return epsilon_parse(g);
  ScfgChart chart(g, s);
  return chart.best(g.grammar.start(), 0, s.size());
}

ScfgApproxResult viterbi_approx(const Scfg& g, const TerminalString& s, double eps, const ApproxOptions& opts) {
  if (!(eps > 0 && eps <= 1)) throw InvalidArgument("eps must lie in (0, 1]");
  for (TerminalId t : s)
    if (t >= g.grammar.num_terminals()) throw UnknownSymbolError("symbol outside the grammar's terminals");
  const std::size_t n = s.size();
  const std::size_t N = n + 1;
  ScfgApproxResult out;
  out.n = n;
  out.eps = eps;
  out.delta = eps * eps / 16;
  out.values.assign(N * N, kInfinity);
  if (n == 0) {
    out.parse = epsilon_parse(g);
    if (out.parse) out.values[0] = out.parse->score;
    return out;
  }

  ScoredGrammar ge = scored_from_cnf(g.grammar, true);
  const NonterminalId S = g.grammar.start();
  double max_score = 0, min_positive = kInfinity;
  for (const ScoredProduction& p : ge.productions()) {
    max_score = std::max(max_score, p.score);
    if (p.score > 0) min_positive = std::min(min_positive, p.score);
  }
  const double base = min_positive < 1 ? min_positive : 1.0;
  const double worst = static_cast<double>(2 * n - 1) * max_score;
  LevelGrid grid(out.delta, std::max(base, opts.grid_headroom * worst), base);

  const double C = opts.exact_cap;
  TupleMatrix mc = closure(string_matrix(s, ge, C), ge, chart_config(&opts, C));

  out.eta = opts.runs ? opts.runs : median_runs(n);
  std::vector<std::uint64_t> seeds;
  for (std::size_t r = 0; r < out.eta; ++r) seeds.push_back(derive_run_seed(opts.seed, r));
  ClosureConfig run_cfg = chart_config(&opts, grid.top());
  run_cfg.rounding = RoundingConfig{grid, 0, RoundingConfig::Style::scfg};
  auto run_once = [&](std::size_t r) {
    ClosureConfig cfg = run_cfg;
    cfg.rounding->seed = seeds[r];
    return closure_plus_plus(mc, ge, cfg);
  };

  std::vector<std::vector<double>> est(out.eta, std::vector<double>(N * N, kInfinity));
  auto worker = [&](unsigned t, unsigned nthreads) {
    for (std::size_t r = t; r < out.eta; r += nthreads) {
      TupleMatrix m = run_once(r);
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
          if (const TupleEntry* e = m.cell(i, j).find(S)) est[r][i * N + j] = e->score;
    }
  };
  unsigned nthreads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(out.eta)));
  if (nthreads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker, t, nthreads);
    for (std::thread& th : pool) th.join();
  }

  std::vector<double> column(out.eta);
  double full_median = kInfinity;
  bool full_exact = false;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      std::size_t idx = i * N + j;
      if (const TupleEntry* e = mc.cell(i, j).find(S)) {
        out.values[idx] = e->score;
        if (i == 0 && j == n) full_exact = true;
        continue;
      }
      for (std::size_t r = 0; r < out.eta; ++r) column[r] = est[r][idx];
      std::sort(column.begin(), column.end());
      double med = column[(out.eta - 1) / 2];
      if (i == 0 && j == n) full_median = med;
      // the exact pass found nothing within C, so a finite optimum exceeds C
      out.values[idx] = med == kInfinity ? med : std::max(med, C);
    }

  if (full_exact) {
    out.parse = parse_from_derivation(ge, replay(mc, ge, nullptr, 0, n, S));
    return out;
  }
  if (full_median == kInfinity) return out;
  for (std::size_t r = 0; r < out.eta; ++r)
    if (est[r][n] == full_median) {
      out.median_run = r;
      break;
    }
  TupleMatrix m = run_once(out.median_run);
  out.parse = parse_from_derivation(ge, replay(m, ge, nullptr, 0, n, S));
  out.parse->estimate = out.values[n];
  return out;
}

}  // namespace lanedit
