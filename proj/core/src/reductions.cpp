#include "lanedit/reductions.hpp"

#include "lanedit/closure.hpp"
#include "lanedit/errors.hpp"
#include "lanedit/scfg.hpp"
#include "lanedit/tuplemat.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace lanedit {

namespace {

std::string idx_name(const char* base, std::size_t p, std::size_t q) {
  return std::string(base) + "_" + std::to_string(p) + "_" + std::to_string(q);
}

int top_bit(std::uint64_t v) {
  int b = -1;
  while (v) {
    v >>= 1;
    ++b;
  }
  return b;
}

void require_square_pair(std::size_t ar, std::size_t ac, std::size_t br, std::size_t bc) {
  if (ar == 0 || ar != ac || br != bc || ar != br) throw InvalidArgument("reduction needs two m x m matrices, m >= 1");
}

struct StringAlphabet {
  std::vector<TerminalId> s;  // s[l] for l in [1, 3d+6]; s[0] unused
  TerminalId x = 0;
};

StringAlphabet intern_alphabet(Grammar& g, std::size_t d) {
  StringAlphabet a;
  const std::size_t len = 3 * d + 6;
  a.s.assign(len + 1, 0);
  for (std::size_t l = 1; l <= len; ++l) a.s[l] = g.intern_terminal("s_" + std::to_string(l));
  a.x = g.intern_terminal("x");
  return a;
}

TerminalString instance_string(const StringAlphabet& a) {
  return TerminalString(a.s.begin() + 1, a.s.end());
}

Production rule(NonterminalId lhs, std::vector<Symbol> rhs, std::optional<Rational> p = std::nullopt) {
  return Production{lhs, std::move(rhs), std::move(p)};
}

// X nonterminals by bit: x_bits[b] derives 2^b copies of x.
struct PowerFamily {
  std::vector<NonterminalId> bits;

  std::vector<Symbol> expand(std::uint64_t w) const {
    std::vector<Symbol> out;
    for (int b = top_bit(w); b >= 0; --b)
      if (w >> b & 1U) out.push_back(Symbol::nt(bits.at(static_cast<std::size_t>(b))));
    return out;
  }
};

}  // namespace

std::size_t reduction_block(std::size_t m) {
  std::size_t d = 1;
  while (d * d * d < m) ++d;
  return d;
}

IndexSplit split_index(std::size_t i, std::size_t d) {
  if (i == 0 || d == 0) throw InvalidArgument("matrix indices are 1-based");
  return {(i - 1) / d + 1, (i - 1) % d + 2};
}

std::size_t join_index(IndexSplit s, std::size_t d) {
  if (s.hi == 0 || s.lo < 2 || s.lo > d + 1) throw InvalidArgument("index split out of range");
  return (s.hi - 1) * d + (s.lo - 2) + 1;
}

ConsistencyTable::ConsistencyTable(const Grammar& cnf, const TerminalString& s)
    : n_(s.size()), nts_(cnf.num_nonterminals()) {
  const std::size_t N = n_ + 1;
  auto at = [&](std::size_t i, std::size_t j, NonterminalId a) { return (i * N + j) * nts_ + a; };
  std::vector<char> inside(N * N * nts_, 0);
  outside_.assign(N * N * nts_, 0);
  if (n_ == 0) return;

  std::vector<const Production*> binary;
  std::vector<std::vector<const Production*>> by_lhs(nts_);
  for (const Production& p : cnf.productions()) {
    if (p.is_binary()) {
      binary.push_back(&p);
      by_lhs[p.lhs].push_back(&p);
    } else if (p.is_terminal_rule()) {
      for (std::size_t i = 0; i < n_; ++i)
        if (s[i] == p.rhs[0].id) inside[at(i, i + 1, p.lhs)] = 1;
    }
  }
  for (std::size_t len = 2; len <= n_; ++len)
    for (std::size_t i = 0; i + len <= n_; ++i) {
      const std::size_t j = i + len;
      for (const Production* p : binary) {
        char& cell = inside[at(i, j, p->lhs)];
        if (cell) continue;
        for (std::size_t k = i + 1; k < j && !cell; ++k)
          cell = inside[at(i, k, p->rhs[0].id)] && inside[at(k, j, p->rhs[1].id)];
      }
    }

  outside_[at(0, n_, cnf.start())] = 1;
  for (std::size_t len = n_; len >= 2; --len)
    for (std::size_t i = 0; i + len <= n_; ++i) {
      const std::size_t j = i + len;
      for (NonterminalId a = 0; a < nts_; ++a) {
        if (!outside_[at(i, j, a)]) continue;
        for (const Production* p : by_lhs[a]) {
          const NonterminalId l = p->rhs[0].id, r = p->rhs[1].id;
          for (std::size_t k = i + 1; k < j; ++k) {
            if (inside[at(k, j, r)]) outside_[at(i, k, l)] = 1;
            if (inside[at(i, k, l)]) outside_[at(k, j, r)] = 1;
          }
        }
      }
    }
}

bool ConsistencyTable::consistent(NonterminalId a, std::size_t begin, std::size_t end) const {
  if (a >= nts_ || begin > end || end > n_) return false;
  const std::size_t N = n_ + 1;
  return outside_[(begin * N + end) * nts_ + a] != 0;
}

NonterminalId LedReductionInstance::c_nonterminal(std::size_t p, std::size_t q) const {
  if (p == 0 || q == 0 || p > blocks || q > blocks) throw InvalidArgument("block index out of range");
  return c_ids[(p - 1) * blocks + (q - 1)];
}

LedQuery LedReductionInstance::query(std::size_t i, std::size_t j) const {
  if (i == 0 || j == 0 || i > m || j > m) throw InvalidArgument("matrix index out of range");
  IndexSplit si = split_index(i, d), sj = split_index(j, d);
  LedQuery q;
  q.nt = c_nonterminal(si.hi, sj.hi);
  q.begin = si.lo - 1;
  q.end = sj.lo + 2 * delta;
  q.offset = (2 * max_entry + 1) * static_cast<std::int64_t>(2 * delta + sj.lo - si.lo);
  return q;
}

LedReductionInstance build_led_instance(const IntMatrix& a, const IntMatrix& b) {
  require_square_pair(a.rows(), a.cols(), b.rows(), b.cols());
  LedReductionInstance inst;
  const std::size_t m = a.rows();
  std::int64_t M = 0;
  for (const IntMatrix* mat : {&a, &b})
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (const IntEntry& e = (*mat)(i, j)) {
          if (*e < 0) throw InvalidArgument("reduction entries must be non-negative");
          M = std::max(M, *e);
        }

  const std::size_t d = reduction_block(m);
  const std::size_t delta = d + 2;
  inst.m = m;
  inst.d = d;
  inst.delta = delta;
  inst.max_entry = M;
  inst.blocks = split_index(m, d).hi;

  Grammar& g = inst.grammar;
  const NonterminalId S = g.intern_nonterminal("S");
  g.set_start(S);
  const StringAlphabet sig = intern_alphabet(g, d);
  inst.s = instance_string(sig);
  auto sym = [&](std::size_t l) { return Symbol::t(sig.s.at(l)); };

  // X-rules: X_1 -> x, X_{2^i} -> X_{2^{i-1}} X_{2^{i-1}}
  const std::uint64_t unit = 2 * static_cast<std::uint64_t>(M) + 1;
  PowerFamily xs;
  for (int i = 0; i <= top_bit(unit); ++i) {
    NonterminalId id = g.intern_nonterminal("X_" + std::to_string(1ULL << i));
    if (i == 0)
      g.add_production(rule(id, {Symbol::t(sig.x)}));
    else
      g.add_production(rule(id, {Symbol::nt(xs.bits.back()), Symbol::nt(xs.bits.back())}));
    xs.bits.push_back(id);
  }

  // Z-rules: Z_1 -> hat(2M+1), Z_{2^i} -> Z_{2^{i-1}} Z_{2^{i-1}}; Y_r for r <= d+1
  const std::size_t y_max = d + 1;
  PowerFamily zs;
  for (int i = 0; i <= top_bit(y_max); ++i) {
    NonterminalId id = g.intern_nonterminal("Z_" + std::to_string(1ULL << i));
    if (i == 0)
      g.add_production(rule(id, xs.expand(unit)));
    else
      g.add_production(rule(id, {Symbol::nt(zs.bits.back()), Symbol::nt(zs.bits.back())}));
    zs.bits.push_back(id);
  }
  std::vector<NonterminalId> ys(y_max + 1);
  for (std::size_t r = 1; r <= y_max; ++r) {
    ys[r] = g.intern_nonterminal("Y_" + std::to_string(r));
    g.add_production(rule(ys[r], zs.expand(r)));
  }

  // W-rules
  const std::size_t len = 3 * d + 6;
  const NonterminalId W = g.intern_nonterminal("W");
  for (std::size_t l = 1; l <= len; ++l) {
    g.add_production(rule(W, {sym(l), Symbol::nt(W)}));
    g.add_production(rule(W, {sym(l)}));
  }

  // New-W-rules, only for the spans the A- and B-rules name
  std::map<std::pair<std::size_t, std::size_t>, NonterminalId> wspan;
  auto add_wspan = [&](std::size_t i, std::size_t j) {
    if (wspan.count({i, j})) return;
    NonterminalId id = g.intern_nonterminal(idx_name("W", i, j));
    std::vector<Symbol> rhs;
    for (std::size_t l = i; l <= j; ++l) rhs.push_back(sym(l));
    g.add_production(rule(id, std::move(rhs)));
    wspan[{i, j}] = id;
  };
  for (std::size_t lo1 = 2; lo1 <= d + 1; ++lo1)
    for (std::size_t lo2 = 2; lo2 <= d + 1; ++lo2) {
      add_wspan(lo1 + 1, lo2 + delta - 1);
      add_wspan(lo1 + delta + 2, lo2 + 2 * delta - 1);
    }

  const std::size_t P = inst.blocks;
  std::vector<NonterminalId> as(P * P), bs(P * P);
  for (std::size_t p = 1; p <= P; ++p)
    for (std::size_t q = 1; q <= P; ++q) {
      as[(p - 1) * P + q - 1] = g.intern_nonterminal(idx_name("A", p, q));
      bs[(p - 1) * P + q - 1] = g.intern_nonterminal(idx_name("B", p, q));
    }
  inst.c_ids.resize(P * P);
  for (std::size_t p = 1; p <= P; ++p)
    for (std::size_t q = 1; q <= P; ++q) inst.c_ids[(p - 1) * P + q - 1] = g.intern_nonterminal(idx_name("C", p, q));

  // A-rules: A_{i1,j1} -> Y_{δ-i2} s_{i2} W_{i2+1}^{j2+δ-1} hat(a) s_{j2+δ} Y_{j2}
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t j = 1; j <= m; ++j) {
      const IntEntry& e = a(i - 1, j - 1);
      if (!e) continue;
      IndexSplit si = split_index(i, d), sj = split_index(j, d);
      std::vector<Symbol> rhs{Symbol::nt(ys[delta - si.lo]), sym(si.lo),
                              Symbol::nt(wspan.at({si.lo + 1, sj.lo + delta - 1}))};
      for (Symbol x : xs.expand(static_cast<std::uint64_t>(*e))) rhs.push_back(x);
      rhs.push_back(sym(sj.lo + delta));
      rhs.push_back(Symbol::nt(ys[sj.lo]));
      g.add_production(rule(as[(si.hi - 1) * P + sj.hi - 1], std::move(rhs)));
    }
  // B-rules: B_{j1,k1} -> Y_{δ-j2} s_{j2+δ+1} W_{j2+δ+2}^{k2+2δ-1} hat(b) s_{k2+2δ} Y_{k2}
  for (std::size_t j = 1; j <= m; ++j)
    for (std::size_t k = 1; k <= m; ++k) {
      const IntEntry& e = b(j - 1, k - 1);
      if (!e) continue;
      IndexSplit sj = split_index(j, d), sk = split_index(k, d);
      std::vector<Symbol> rhs{Symbol::nt(ys[delta - sj.lo]), sym(sj.lo + delta + 1),
                              Symbol::nt(wspan.at({sj.lo + delta + 2, sk.lo + 2 * delta - 1}))};
      for (Symbol x : xs.expand(static_cast<std::uint64_t>(*e))) rhs.push_back(x);
      rhs.push_back(sym(sk.lo + 2 * delta));
      rhs.push_back(Symbol::nt(ys[sk.lo]));
      g.add_production(rule(bs[(sj.hi - 1) * P + sk.hi - 1], std::move(rhs)));
    }
  // C-rules and S-rules
  for (std::size_t p = 1; p <= P; ++p)
    for (std::size_t q = 1; q <= P; ++q)
      for (std::size_t r = 1; r <= P; ++r)
        g.add_production(rule(inst.c_ids[(p - 1) * P + q - 1],
                              {Symbol::nt(as[(p - 1) * P + r - 1]), Symbol::nt(bs[(r - 1) * P + q - 1])}));
  for (NonterminalId c : inst.c_ids) g.add_production(rule(S, {Symbol::nt(W), Symbol::nt(c), Symbol::nt(W)}));
  return inst;
}

ScoredGrammar insertion_only_grammar(const Grammar& cnf) {
  ScoredGrammar ge = scored_from_cnf(cnf);
  std::vector<char> seen(cnf.num_nonterminals(), 0);
  for (const Production& p : cnf.productions()) {
    if (!p.is_terminal_rule() || seen[p.lhs]) continue;
    seen[p.lhs] = 1;
    ge.add(ScoredProduction{Production{p.lhs, {}, std::nullopt}, 1, RuleKind::elem_delete, p.rhs[0].id});
  }
  return ge;
}

namespace {

std::vector<std::optional<double>> answer_queries(const Grammar& cnf, const ScoredGrammar& ge, const TerminalString& s,
                                                  const std::vector<SpanQuery>& queries) {
  DeletionSet dn = deletion_set_final(ge, ge.num_nonterminals() + 2);
  ClosureConfig cfg;
  cfg.cap = kInfinity;
  cfg.dn = &dn;
  TupleMatrix m = closure(string_matrix(s, ge, kInfinity), ge, cfg);
  ConsistencyTable ct(cnf, s);
  std::vector<std::optional<double>> out;
  out.reserve(queries.size());
  for (const SpanQuery& q : queries) {
    if (q.end > s.size() || q.begin >= q.end) throw InvalidArgument("query span out of range");
    const TupleEntry* e = m.cell(q.begin, q.end).find(q.nt);
    if (e && ct.consistent(q.nt, q.begin, q.end))
      out.push_back(e->score);
    else
      out.push_back(std::nullopt);
  }
  return out;
}

}  // namespace

std::vector<std::optional<double>> insertion_only_led(const LedReductionInstance& inst,
                                                      const std::vector<SpanQuery>& queries) {
  Grammar cnf = to_cnf(inst.grammar);
  return answer_queries(cnf, insertion_only_grammar(cnf), inst.s, queries);
}

IntMatrix distance_product_via_led(const IntMatrix& a, const IntMatrix& b, const LedOracle& oracle) {
  LedReductionInstance inst = build_led_instance(a, b);
  const std::size_t m = inst.m;
  std::vector<LedQuery> qs;
  std::vector<SpanQuery> spans;
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t j = 1; j <= m; ++j) {
      qs.push_back(inst.query(i, j));
      spans.push_back(qs.back());
    }
  std::vector<std::optional<double>> ans = oracle(inst, spans);
  if (ans.size() != spans.size()) throw InvalidArgument("oracle answered a different number of queries");

  IntMatrix c(m, m, std::nullopt);
  for (std::size_t k = 0; k < qs.size(); ++k) {
    if (!ans[k] || std::isinf(*ans[k])) continue;
    const double v = *ans[k];
    if (v != std::floor(v)) throw InvalidArgument("oracle returned a non-integer score");
    const std::int64_t value = static_cast<std::int64_t>(v) - qs[k].offset;
    // a true sum is at most 2M; anything above comes from a derivation with mismatched
    // indices, which only wins when every a(i,k) + b(k,j) is infinite
    if (value > 2 * inst.max_entry) continue;
    c(k / m, k % m) = value;
  }
  return c;
}

double WeightedScoring::cost(TerminalId t, EditKind k) const {
  for (const EditCost& e : costs)
    if (e.symbol == t && e.kind == k) return e.cost;
  throw InvalidArgument("no cost for symbol");
}

WeightedScoring build_weighted_led_scoring(const LedReductionInstance& inst) {
  WeightedScoring w;
  const double heavy = static_cast<double>(3 * inst.d + 6) * static_cast<double>(inst.max_entry + 1);
  for (TerminalId t = 0; t < inst.grammar.num_terminals(); ++t) {
    w.costs.push_back({t, EditKind::insertion, 1});
    w.costs.push_back({t, EditKind::deletion, heavy});
    w.costs.push_back({t, EditKind::substitution, heavy});
  }
  return w;
}

ScoredGrammar weighted_error_grammar(const Grammar& cnf, const std::vector<TerminalId>& sigma,
                                     const WeightedScoring& scoring) {
  ScoredGrammar unit = build_error_grammar(cnf, sigma);
  ScoredGrammar out(cnf);
  for (std::size_t a = cnf.num_nonterminals(); a < unit.num_nonterminals(); ++a)
    out.add_nonterminal(unit.nonterminal_name(static_cast<NonterminalId>(a)));
  if (unit.insert_nonterminal()) out.set_insert_nonterminal(*unit.insert_nonterminal());
  out.set_terminal_count(unit.num_terminals());
  for (ScoredProduction p : unit.productions()) {
    switch (p.kind) {
      case RuleKind::elem_subst:
        p.score = scoring.cost(p.production.rhs[0].id, EditKind::substitution);
        break;
      case RuleKind::elem_insert:
        p.score = scoring.cost(p.production.rhs[0].id, EditKind::deletion);
        break;
      case RuleKind::elem_delete:
        p.score = scoring.cost(*p.edit_symbol, EditKind::insertion);
        break;
      default:
        break;
    }
    out.add(std::move(p));
  }
  return out;
}

std::vector<std::optional<double>> weighted_led(const LedReductionInstance& inst, const WeightedScoring& scoring,
                                                const std::vector<SpanQuery>& queries) {
  Grammar cnf = to_cnf(inst.grammar);
  ScoredGrammar ge = weighted_error_grammar(cnf, working_alphabet(cnf, inst.s), scoring);
  return answer_queries(cnf, ge, inst.s, queries);
}

NonterminalId ScfgReductionInstance::c_nonterminal(std::size_t p, std::size_t q) const {
  if (p == 0 || q == 0 || p > blocks || q > blocks) throw InvalidArgument("block index out of range");
  return c_ids[(p - 1) * blocks + (q - 1)];
}

ScfgQuery ScfgReductionInstance::query(std::size_t i, std::size_t j) const {
  if (i == 0 || j == 0 || i > m || j > m) throw InvalidArgument("matrix index out of range");
  IndexSplit si = split_index(i, d), sj = split_index(j, d);
  ScfgQuery q;
  q.nt = c_nonterminal(si.hi, sj.hi);
  q.begin = si.lo - 1;
  q.end = sj.lo + 2 * delta;
  q.exponent = sj.lo + 2 * delta - si.lo - 3;
  return q;
}

ScfgReductionInstance build_scfg_instance(const RationalMatrix& a, const RationalMatrix& b) {
  require_square_pair(a.rows(), a.cols(), b.rows(), b.cols());
  const std::size_t m = a.rows();
  for (const RationalMatrix* mat : {&a, &b})
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if ((*mat)(i, j) <= 0) throw InvalidArgument("reduction entries must be positive");

  ScfgReductionInstance inst;
  const std::size_t d = reduction_block(m);
  const std::size_t delta = d + 2;
  const std::size_t P = d * d;
  inst.m = m;
  inst.d = d;
  inst.delta = delta;
  inst.blocks = P;

  // Count_A(p, q) = sum of 1/a over the entries falling into block (p, q)
  inst.count_a.assign(P * P, Rational(0));
  inst.count_b.assign(P * P, Rational(0));
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t cell = (split_index(i, d).hi - 1) * P + split_index(j, d).hi - 1;
      inst.count_a[cell] += Rational(1) / a(i - 1, j - 1);
      inst.count_b[cell] += Rational(1) / b(i - 1, j - 1);
    }
  inst.max_count_a = *std::max_element(inst.count_a.begin(), inst.count_a.end());
  inst.max_count_b = *std::max_element(inst.count_b.begin(), inst.count_b.end());

  Grammar& g = inst.grammar;
  const NonterminalId S = g.intern_nonterminal("S");
  g.set_start(S);
  const StringAlphabet sig = intern_alphabet(g, d);
  inst.s = instance_string(sig);
  auto sym = [&](std::size_t l) { return Symbol::t(sig.s.at(l)); };

  const std::size_t len = 3 * d + 6;
  const NonterminalId W = g.intern_nonterminal("W");
  const Rational pw(1, static_cast<long long>(2 * len));
  for (std::size_t l = 1; l <= len; ++l) {
    g.add_production(rule(W, {sym(l), Symbol::nt(W)}, pw));
    g.add_production(rule(W, {sym(l)}, pw));
  }

  inst.a_ids.resize(P * P);
  inst.b_ids.resize(P * P);
  inst.c_ids.resize(P * P);
  for (std::size_t p = 1; p <= P; ++p)
    for (std::size_t q = 1; q <= P; ++q) {
      inst.a_ids[(p - 1) * P + q - 1] = g.intern_nonterminal(idx_name("A", p, q));
      inst.b_ids[(p - 1) * P + q - 1] = g.intern_nonterminal(idx_name("B", p, q));
    }
  for (std::size_t p = 1; p <= P; ++p)
    for (std::size_t q = 1; q <= P; ++q) inst.c_ids[(p - 1) * P + q - 1] = g.intern_nonterminal(idx_name("C", p, q));

  // A-rules: A_{i1,j1} -> s_{i2} W s_{j2+δ}; B-rules: B_{j1,k1} -> s_{j2+δ+1} W s_{k2+2δ}
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t j = 1; j <= m; ++j) {
      IndexSplit si = split_index(i, d), sj = split_index(j, d);
      const std::size_t cell = (si.hi - 1) * P + sj.hi - 1;
      g.add_production(rule(inst.a_ids[cell], {sym(si.lo), Symbol::nt(W), sym(sj.lo + delta)},
                            Rational(1) / (a(i - 1, j - 1) * inst.max_count_a)));
      g.add_production(rule(inst.b_ids[cell], {sym(si.lo + delta + 1), Symbol::nt(W), sym(sj.lo + 2 * delta)},
                            Rational(1) / (b(i - 1, j - 1) * inst.max_count_b)));
    }
  for (std::size_t cell = 0; cell < P * P; ++cell) {
    if (inst.max_count_a > inst.count_a[cell])
      g.add_production(rule(inst.a_ids[cell], {Symbol::t(sig.x)},
                            (inst.max_count_a - inst.count_a[cell]) / inst.max_count_a));
    if (inst.max_count_b > inst.count_b[cell])
      g.add_production(rule(inst.b_ids[cell], {Symbol::t(sig.x)},
                            (inst.max_count_b - inst.count_b[cell]) / inst.max_count_b));
  }

  const Rational pc(1, static_cast<long long>(P));
  for (std::size_t p = 1; p <= P; ++p)
    for (std::size_t q = 1; q <= P; ++q)
      for (std::size_t r = 1; r <= P; ++r)
        g.add_production(rule(inst.c_ids[(p - 1) * P + q - 1],
                              {Symbol::nt(inst.a_ids[(p - 1) * P + r - 1]), Symbol::nt(inst.b_ids[(r - 1) * P + q - 1])},
                              pc));
  const Rational ps(1, static_cast<long long>(P * P));
  for (NonterminalId c : inst.c_ids) g.add_production(rule(S, {Symbol::nt(W), Symbol::nt(c), Symbol::nt(W)}, ps));

  validate_scfg(g);
  return inst;
}

std::vector<Rational> stochastic_parse_oracle(const ScfgReductionInstance& inst, const std::vector<SpanQuery>& queries) {
  Scfg scfg = make_scfg(inst.grammar);
  ScfgChart chart(scfg, inst.s);
  ConsistencyTable ct(scfg.grammar, inst.s);
  std::vector<Rational> out;
  out.reserve(queries.size());
  for (const SpanQuery& q : queries) {
    if (!ct.consistent(q.nt, q.begin, q.end)) {
      out.emplace_back(0);
      continue;
    }
    std::optional<ScoredParse> best = chart.best(q.nt, q.begin, q.end);
    out.push_back(best ? best->probability : Rational(0));
  }
  return out;
}

namespace {

Rational scfg_scale(const ScfgReductionInstance& inst, std::size_t exponent) {
  Rational scale = Rational(static_cast<long long>(inst.d * inst.d)) * inst.max_count_a * inst.max_count_b;
  scale *= Rational(boost::multiprecision::pow(BigInt(inst.w_inverse()), static_cast<unsigned>(exponent)));
  return scale;
}

}  // namespace

RationalEntryMatrix min_times_via_scfg(const RationalMatrix& a, const RationalMatrix& b, const ScfgOracle& oracle) {
  ScfgReductionInstance inst = build_scfg_instance(a, b);
  const std::size_t m = inst.m;
  std::vector<ScfgQuery> qs;
  std::vector<SpanQuery> spans;
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t j = 1; j <= m; ++j) {
      qs.push_back(inst.query(i, j));
      spans.push_back(qs.back());
    }
  std::vector<Rational> ans = oracle(inst, spans);
  if (ans.size() != spans.size()) throw InvalidArgument("oracle answered a different number of queries");

  RationalEntryMatrix c(m, m, std::nullopt);
  for (std::size_t k = 0; k < qs.size(); ++k) {
    if (ans[k] <= 0) continue;
    c(k / m, k % m) = Rational(1) / (ans[k] * scfg_scale(inst, qs[k].exponent));
  }
  return c;
}

Matrix<double> min_times_via_scfg_log(const RationalMatrix& a, const RationalMatrix& b) {
  ScfgReductionInstance inst = build_scfg_instance(a, b);
  Scfg scfg = make_scfg(inst.grammar);
  ScfgChart chart(scfg, inst.s);
  ConsistencyTable ct(scfg.grammar, inst.s);
  const std::size_t m = inst.m;
  const double base = std::log2(static_cast<double>(inst.d * inst.d)) + log2_rational(inst.max_count_a) +
                      log2_rational(inst.max_count_b);
  const double per_w = std::log2(static_cast<double>(inst.w_inverse()));
  Matrix<double> c(m, m, kInfinity);
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t j = 1; j <= m; ++j) {
      ScfgQuery q = inst.query(i, j);
      const TupleEntry* e = chart.matrix().cell(q.begin, q.end).find(q.nt);
      if (!e || !ct.consistent(q.nt, q.begin, q.end)) continue;
      // score is log2(1/q); c = 1/(q · scale)
      c(i - 1, j - 1) = std::exp2(e->score - base - per_w * static_cast<double>(q.exponent));
    }
  return c;
}

TriangleReport negative_triangle_via_min_times(const IntMatrix& w, std::int64_t bound, const MinTimesProduct& product) {
  if (bound < 3) throw InvalidArgument("weight bound must be at least 3");
  const std::size_t n = w.rows();
  if (w.cols() != n) throw InvalidArgument("weight matrix must be square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (w(i, j) != w(j, i)) throw InvalidArgument("weight matrix must be symmetric");
      if (w(i, j) && (*w(i, j) < -bound || *w(i, j) > bound)) throw InvalidArgument("weight outside [-W, W]");
    }

  const BigInt W = bound;
  const BigInt W2 = W * W, W3 = W2 * W, W6 = W3 * W3;
  // missing edges and the diagonal get 4W³, which keeps every non-triangle product above W²
  RationalMatrix A(n, n, Rational(4 * W3));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && w(i, j)) A(i, j) = Rational(BigInt(*w(i, j)) + W3);

  TriangleReport rep;
  if (n == 0) return rep;
  RationalMatrix C = product(A, A);
  if (C.rows() != n || C.cols() != n) throw InvalidArgument("product has the wrong shape");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !w(i, j)) continue;
      Rational shifted = C(i, j) - Rational(W6) + Rational(W3 * *w(i, j)) + Rational(2 * W2);
      if (boost::multiprecision::denominator(shifted) != 1) throw InvalidArgument("product is not integral");
      BigInt v = boost::multiprecision::numerator(shifted);
      if (!rep.min_shifted || v < *rep.min_shifted) rep.min_shifted = v;
      if (v <= 0 && !rep.found) {
        rep.found = true;
        rep.witness = std::make_pair(i, j);
      }
    }
  return rep;
}

}  // namespace lanedit
