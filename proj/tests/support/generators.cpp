#include "generators.hpp"

#include <numeric>

namespace lanedit::testgen {

std::string letters(std::size_t i) { return std::string(1, static_cast<char>('a' + i)); }

namespace {

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

std::string nt_name(std::size_t i) { return i == 0 ? "S" : std::string(1, static_cast<char>('A' + i - 1)); }

void intern_all(Grammar& g, std::size_t nts, std::size_t terminals) {
  for (std::size_t i = 0; i < nts; ++i) g.intern_nonterminal(nt_name(i));
  for (std::size_t t = 0; t < terminals; ++t) g.intern_terminal(letters(t));
  g.set_start(0);
}

}  // namespace

Grammar random_cfg(Rng& rng, std::size_t max_nts, std::size_t terminals, bool allow_epsilon) {
  for (;;) {
    Grammar g;
    const std::size_t nts = 1 + pick(rng, max_nts);
    intern_all(g, nts, terminals);
    const std::size_t rules = nts + 1 + pick(rng, 2 * nts + 2);
    for (std::size_t r = 0; r < rules; ++r) {
      Production p;
      p.lhs = static_cast<NonterminalId>(r < nts ? r : pick(rng, nts));
      std::size_t len = pick(rng, 4);
      if (len == 0 && !allow_epsilon) len = 1;
      for (std::size_t k = 0; k < len; ++k) {
        if (pick(rng, 2) == 0)
          p.rhs.push_back(Symbol::t(static_cast<TerminalId>(pick(rng, terminals))));
        else
          p.rhs.push_back(Symbol::nt(static_cast<NonterminalId>(pick(rng, nts))));
      }
      g.add_production(std::move(p));
    }
    if (shortest_length(to_cnf(g))) return g;
  }
}

Grammar random_cnf(Rng& rng, std::size_t nts, std::size_t terminals) {
  for (;;) {
    Grammar g;
    intern_all(g, nts, terminals);
    for (std::size_t a = 0; a < nts; ++a) {
      const std::size_t rules = 1 + pick(rng, 3);
      for (std::size_t r = 0; r < rules; ++r) {
        if (pick(rng, 3) == 0)
          g.add_production(Production{static_cast<NonterminalId>(a),
                                      {Symbol::t(static_cast<TerminalId>(pick(rng, terminals)))}, std::nullopt});
        else
          g.add_production(Production{static_cast<NonterminalId>(a),
                                      {Symbol::nt(static_cast<NonterminalId>(pick(rng, nts))),
                                       Symbol::nt(static_cast<NonterminalId>(pick(rng, nts)))},
                                      std::nullopt});
      }
    }
    if (shortest_length(g)) return g;
  }
}

Grammar random_scfg(Rng& rng, std::size_t nts, std::size_t terminals) {
  for (;;) {
    Grammar g;
    intern_all(g, nts, terminals);
    for (std::size_t a = 0; a < nts; ++a) {
      const std::size_t rules = 1 + pick(rng, 4);
      std::vector<long long> w(rules);
      for (auto& x : w) x = 1 + static_cast<long long>(pick(rng, 6));
      const long long total = std::accumulate(w.begin(), w.end(), 0LL);
      bool has_terminal = false;
      for (std::size_t r = 0; r < rules; ++r) {
        Production p;
        p.lhs = static_cast<NonterminalId>(a);
        p.prob = Rational(w[r], total);
        // every nonterminal gets at least one terminal rule so most strings parse
        if (!has_terminal || pick(rng, 3) == 0) {
          p.rhs = {Symbol::t(static_cast<TerminalId>(pick(rng, terminals)))};
          has_terminal = true;
        } else {
          p.rhs = {Symbol::nt(static_cast<NonterminalId>(pick(rng, nts))),
                   Symbol::nt(static_cast<NonterminalId>(pick(rng, nts)))};
        }
        g.add_production(std::move(p));
      }
    }
    // merge duplicate right sides so the table stays a distribution over distinct rules
    Grammar merged;
    intern_all(merged, nts, terminals);
    for (const Production& p : g.productions()) {
      bool found = false;
      for (Production& q : merged.mutable_productions())
        if (q.lhs == p.lhs && q.rhs == p.rhs) {
          *q.prob += *p.prob;
          found = true;
        }
      if (!found) merged.add_production(p);
    }
    if (shortest_length(merged)) return merged;
  }
}

TerminalString random_string(Rng& rng, std::size_t alphabet, std::size_t len) {
  TerminalString s(len);
  for (auto& t : s) t = static_cast<TerminalId>(pick(rng, alphabet));
  return s;
}

IntMatrix random_int_matrix(Rng& rng, std::size_t m, std::int64_t lo, std::int64_t hi) {
  IntMatrix a(m, m);
  std::uniform_int_distribution<std::int64_t> d(lo, hi);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a(i, j) = d(rng);
  return a;
}

RationalMatrix random_rational_matrix(Rng& rng, std::size_t m, long long max_num, long long max_den) {
  RationalMatrix a(m, m);
  std::uniform_int_distribution<long long> num(1, max_num), den(1, max_den);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a(i, j) = Rational(num(rng), den(rng));
  return a;
}

IntMatrix random_graph(Rng& rng, std::size_t n, std::int64_t bound, double density) {
  IntMatrix w(n, n, std::nullopt);
  std::uniform_int_distribution<std::int64_t> d(-bound, bound);
  std::bernoulli_distribution edge(density);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (edge(rng)) w(i, j) = w(j, i) = d(rng);
  return w;
}

}  // namespace lanedit::testgen
