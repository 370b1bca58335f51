#include "lanedit/editdist.hpp"

#include "lanedit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace lanedit {

const char* to_string(EditOp::Kind k) {
  switch (k) {
    case EditOp::Kind::insert: return "insert";
    case EditOp::Kind::erase: return "delete";
    case EditOp::Kind::substitute: return "substitute";
  }
  return "?";
}

TerminalString apply_script(const TerminalString& s, const EditScript& script) {
  TerminalString out = s;
  for (const EditOp& op : script.ops) {
    switch (op.kind) {
      case EditOp::Kind::insert:
        if (op.position > out.size()) throw InvalidArgument("insert position out of range");
        out.insert(out.begin() + static_cast<std::ptrdiff_t>(op.position), op.symbol);
        break;
      case EditOp::Kind::erase:
        if (op.position >= out.size()) throw InvalidArgument("delete position out of range");
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(op.position));
        break;
      case EditOp::Kind::substitute:
        if (op.position >= out.size()) throw InvalidArgument("substitute position out of range");
        out[op.position] = op.symbol;
        break;
    }
  }
  return out;
}

std::size_t LedContext::trivial_bound(std::size_t i, std::size_t j) const { return std::max(j - i, shortest); }

LedContext make_led_context(const Grammar& g, const TerminalString& s) {
  LedContext ctx;
  ctx.cnf = to_cnf(g);
  auto shortest = shortest_length(ctx.cnf);
  if (!shortest) throw EmptyLanguageError("the grammar generates no string");
  ctx.shortest = *shortest;
  ctx.s = s;
  ctx.ge = build_error_grammar(ctx.cnf, working_alphabet(ctx.cnf, s));
  // large enough that the fixpoint is always reached
  ctx.dn = deletion_set_final(ctx.ge, ctx.ge.num_nonterminals() + 2);
  return ctx;
}

namespace {

ClosureConfig exact_config(const LedContext& ctx, const LedOptions& opts, double cap) {
  ClosureConfig cfg;
  cfg.cap = cap;
  cfg.algorithm = opts.algorithm;
  cfg.base_block = opts.base_block;
  cfg.product.backend = opts.backend;
  cfg.product.use_sidon = opts.use_sidon;
  cfg.dn = &ctx.dn;
  return cfg;
}

void collect_epsilon(const LedContext& ctx, NonterminalId a, std::size_t pos, EditScript& out, std::size_t& out_len) {
  ProductionIndex p = *ctx.dn.entries.at(a).production;
  const ScoredProduction& sp = ctx.ge[p];
  if (sp.production.is_binary()) {
    collect_epsilon(ctx, sp.production.rhs[0].id, pos, out, out_len);
    collect_epsilon(ctx, sp.production.rhs[1].id, pos, out, out_len);
    return;
  }
  if (sp.kind == RuleKind::elem_delete) {
    out.ops.push_back(EditOp{EditOp::Kind::insert, out_len, *sp.edit_symbol});
    ++out_len;
  }
}

// Cheapest of: keep a shortest member z of L and rewrite s_i..s_{j-1} into it position by position.
EditScript trivial_script(const LedContext& ctx, std::size_t i, std::size_t j) {
  EditScript zs;
  std::size_t zlen = 0;
  collect_epsilon(ctx, ctx.cnf.start(), 0, zs, zlen);
  TerminalString z;
  for (const EditOp& op : zs.ops) z.push_back(op.symbol);
  EditScript out;
  std::size_t len = j - i;
  std::size_t common = std::min(len, z.size());
  for (std::size_t p = 0; p < common; ++p)
    if (ctx.s[i + p] != z[p]) out.ops.push_back(EditOp{EditOp::Kind::substitute, p, z[p]});
  for (std::size_t p = common; p < z.size(); ++p) out.ops.push_back(EditOp{EditOp::Kind::insert, p, z[p]});
  for (std::size_t p = common; p < len; ++p) out.ops.push_back(EditOp{EditOp::Kind::erase, common, ctx.s[i + p]});
  out.cost = static_cast<double>(out.ops.size());
  return out;
}

EditScript empty_string_script(const LedContext& ctx) {
  EditScript out;
  std::size_t len = 0;
  if (ctx.dn.contains(ctx.cnf.start())) collect_epsilon(ctx, ctx.cnf.start(), 0, out, len);
  out.cost = ctx.dn.score(ctx.cnf.start());
  return out;
}

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

EditScript script_from_derivation(const LedContext& ctx, const Derivation& d, std::size_t /*begin*/) {
  EditScript out;
  std::size_t out_len = 0;
  // iterative in-order walk: children left to right
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    const DerivationNode& node = d.nodes[static_cast<std::size_t>(id)];
    if (node.left >= 0 || node.right >= 0) {
      if (node.right >= 0) stack.push_back(node.right);
      if (node.left >= 0) stack.push_back(node.left);
      continue;
    }
    const ScoredProduction& sp = ctx.ge[*node.production];
    if (sp.production.is_epsilon()) {
      if (sp.kind == RuleKind::elem_delete) {
        out.ops.push_back(EditOp{EditOp::Kind::insert, out_len, *sp.edit_symbol});
        ++out_len;
      }
      continue;
    }
    switch (sp.kind) {
      case RuleKind::elem_subst:
        out.ops.push_back(EditOp{EditOp::Kind::substitute, out_len, *sp.edit_symbol});
        ++out_len;
        break;
      case RuleKind::elem_insert:
        out.ops.push_back(EditOp{EditOp::Kind::erase, out_len, ctx.s.at(node.begin)});
        break;
      default:
        ++out_len;
        break;
    }
  }
  out.cost = d.score;
  return out;
}

ScriptRetrieval retrieve_script_counted(const LedContext& ctx, const TupleMatrix& m, std::size_t i, std::size_t j) {
  if (i == j) return {empty_string_script(ctx), 0};
  if (!m.cell(i, j).find(ctx.cnf.start()))
    throw InvalidArgument("no derivation of the start symbol for this substring");
  Derivation d = replay(m, ctx.ge, &ctx.dn, i, j, ctx.cnf.start());
  return {script_from_derivation(ctx, d, i), d.cells_touched};
}

EditScript retrieve_script(const LedContext& ctx, const TupleMatrix& m, std::size_t i, std::size_t j) {
  return retrieve_script_counted(ctx, m, i, j).script;
}

std::size_t ExactLed::substring_distance(std::size_t i, std::size_t j) const {
  if (i == j) return static_cast<std::size_t>(ctx.dn.score(ctx.cnf.start()));
  const TupleEntry* e = closure.cell(i, j).find(ctx.cnf.start());
  if (!e) throw std::logic_error("start symbol missing below the trivial bound");
  return static_cast<std::size_t>(e->score);
}

ExactLed led_exact_full(const Grammar& g, const TerminalString& s, const LedOptions& opts) {
  ExactLed out;
  out.ctx = make_led_context(g, s);
  double cap = static_cast<double>(out.ctx.trivial_bound(0, s.size()));
  TupleMatrix b = string_matrix(s, out.ctx.ge, cap);
  out.closure = closure(b, out.ctx.ge, exact_config(out.ctx, opts, cap));
  out.distance = out.substring_distance(0, s.size());
  return out;
}

LedResult led_exact(const Grammar& g, const TerminalString& s, const LedOptions& opts) {
  ExactLed full = led_exact_full(g, s, opts);
  LedResult r;
  r.distance = full.distance;
  r.script = retrieve_script(full.ctx, full.closure, 0, s.size());
  return r;
}

std::uint64_t derive_run_seed(std::uint64_t seed, std::size_t run) {
  return splitmix(splitmix(seed) ^ (0xd1b54a32d192ed03ULL * (run + 1)));
}

std::size_t median_runs(std::size_t n) {
  if (n <= 1) return 1;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(6.0 * std::log2(static_cast<double>(n)) - 1e-9)));
}

LocalEstimates led_approx(const Grammar& g, const TerminalString& s, double eps, const ApproxOptions& opts) {
  if (!(eps > 0 && eps <= 1)) throw InvalidArgument("eps must lie in (0, 1]");
  LedContext ctx = make_led_context(g, s);
  const std::size_t n = s.size();
  const std::size_t N = n + 1;
  const NonterminalId S = ctx.cnf.start();

  LocalEstimates out;
  out.n = n;
  out.eps = eps;
  out.delta = eps * eps / 16;
  out.seed = opts.seed;
  out.values.assign(N * N, 0.0);
  out.exact.assign(N * N, 0);
  for (std::size_t i = 0; i < N; ++i) {
    out.values[i * N + i] = ctx.dn.score(S);
    out.exact[i * N + i] = 1;
  }
  if (n == 0) {
    out.eta = 0;
    out.script = empty_string_script(ctx);
    return out;
  }

  const double C = opts.exact_cap;
  TupleMatrix mc = closure(string_matrix(s, ctx.ge, C), ctx.ge, exact_config(ctx, opts, C));

  const double bound = static_cast<double>(ctx.trivial_bound(0, n));
  LevelGrid grid(out.delta, std::max(1.0, opts.grid_headroom * bound));
  out.eta = opts.runs ? opts.runs : median_runs(n);
  for (std::size_t r = 0; r < out.eta; ++r) out.run_seeds.push_back(derive_run_seed(opts.seed, r));

  ClosureConfig run_cfg = exact_config(ctx, opts, grid.top());
  run_cfg.rounding = RoundingConfig{grid, 0, RoundingConfig::Style::led};
  auto run_once = [&](std::size_t r) {
    ClosureConfig cfg = run_cfg;
    cfg.rounding->seed = out.run_seeds[r];
    return closure_plus_plus(mc, ctx.ge, cfg);
  };

  // per-run estimates of S for every cell, +inf where S is absent
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

  const double floor_above_cap = std::floor(C) + 1;
  std::vector<double> column(out.eta);
  double full_median = kInfinity;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      std::size_t idx = i * N + j;
      if (const TupleEntry* e = mc.cell(i, j).find(S)) {
        out.values[idx] = e->score;
        out.exact[idx] = 1;
        continue;
      }
      for (std::size_t r = 0; r < out.eta; ++r) column[r] = est[r][idx];
      std::sort(column.begin(), column.end());
      double med = column[(out.eta - 1) / 2];
      if (i == 0 && j == n) full_median = med;
      double v = std::min(med, static_cast<double>(ctx.trivial_bound(i, j)));
      out.values[idx] = std::max(v, floor_above_cap);
    }

  if (out.exact[n]) {
    out.script = retrieve_script(ctx, mc, 0, n);
    return out;
  }
  // the full-string value is the true cost of the tree kept by the median run
  EditScript best = trivial_script(ctx, 0, n);
  out.median_run = 0;
  for (std::size_t r = 0; r < out.eta; ++r)
    if (est[r][n] == full_median) {
      out.median_run = r;
      break;
    }
  if (full_median != kInfinity) {
    TupleMatrix m = run_once(out.median_run);
    Derivation d = replay(m, ctx.ge, &ctx.dn, 0, n, S);
    EditScript from_tree = script_from_derivation(ctx, d, 0);
    if (from_tree.cost < best.cost) best = std::move(from_tree);
  }
  out.values[n] = best.cost;
  out.script = std::move(best);
  return out;
}

}  // namespace lanedit
