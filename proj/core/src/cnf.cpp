#include "lanedit/errors.hpp"
#include "lanedit/grammar.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace lanedit {

namespace {

std::vector<char> productive_set(const Grammar& g) {
  std::vector<char> productive(g.num_nonterminals(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Production& p : g.productions()) {
      if (productive[p.lhs]) continue;
      bool ok = std::all_of(p.rhs.begin(), p.rhs.end(), [&](const Symbol& s) {
        return s.is_terminal() || productive[s.id];
      });
      if (ok) {
        productive[p.lhs] = 1;
        changed = true;
      }
    }
  }
  return productive;
}

std::vector<char> nullable_set(const Grammar& g) {
  std::vector<char> nullable(g.num_nonterminals(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Production& p : g.productions()) {
      if (nullable[p.lhs]) continue;
      bool ok = std::all_of(p.rhs.begin(), p.rhs.end(), [&](const Symbol& s) {
        return s.is_nonterminal() && nullable[s.id];
      });
      if (ok) {
        nullable[p.lhs] = 1;
        changed = true;
      }
    }
  }
  return nullable;
}

// Copies the symbol tables of g into a grammar without productions.
Grammar empty_like(const Grammar& g) {
  Grammar out;
  for (std::size_t i = 0; i < g.num_nonterminals(); ++i)
    out.intern_nonterminal(g.nonterminal_name(static_cast<NonterminalId>(i)));
  for (const std::string& t : g.terminal_names()) out.intern_terminal(t);
  out.set_start(g.start());
  return out;
}

bool same_rhs(const Production& a, const Production& b) { return a.lhs == b.lhs && a.rhs == b.rhs; }

}  // namespace

Grammar prune_unreachable(const Grammar& g) {
  if (g.num_nonterminals() == 0) return g;
  std::vector<char> productive = productive_set(g);
  std::vector<const Production*> live;
  for (const Production& p : g.productions()) {
    bool ok = productive[p.lhs] && std::all_of(p.rhs.begin(), p.rhs.end(), [&](const Symbol& s) {
                return s.is_terminal() || productive[s.id];
              });
    if (ok) live.push_back(&p);
  }
  std::vector<char> reachable(g.num_nonterminals(), 0);
  reachable[g.start()] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Production* p : live) {
      if (!reachable[p->lhs]) continue;
      for (const Symbol& s : p->rhs)
        if (s.is_nonterminal() && !reachable[s.id]) {
          reachable[s.id] = 1;
          changed = true;
        }
    }
  }
  Grammar out = empty_like(g);
  for (const Production* p : live)
    if (reachable[p->lhs]) out.add_production(*p);
  return out;
}

Grammar to_cnf(const Grammar& input) {
  Grammar g = prune_unreachable(input);
  if (g.is_cnf()) return g;
  const bool stochastic = g.is_stochastic();

  std::vector<Production> rules = g.productions();

  if (!stochastic) {
    // a nullable start that occurs on a right side gets a fresh start above it
    std::vector<char> nullable = nullable_set(g);
    bool start_on_rhs = std::any_of(rules.begin(), rules.end(), [&](const Production& p) {
      return std::any_of(p.rhs.begin(), p.rhs.end(), [&](const Symbol& s) {
        return s.is_nonterminal() && s.id == g.start();
      });
    });
    if (nullable[g.start()] && start_on_rhs) {
      NonterminalId s0 = g.fresh_nonterminal(g.nonterminal_name(g.start()) + "0");
      rules.push_back(Production{s0, {Symbol::nt(g.start())}, std::nullopt});
      g.set_start(s0);
      nullable.resize(g.num_nonterminals(), 0);
      nullable[s0] = 1;
    }

    // epsilon elimination: every subset of nullable occurrences may be dropped
    std::vector<Production> expanded;
    for (const Production& p : rules) {
      if (p.rhs.empty()) continue;
      std::vector<std::size_t> opt;
      for (std::size_t i = 0; i < p.rhs.size(); ++i)
        if (p.rhs[i].is_nonterminal() && nullable[p.rhs[i].id]) opt.push_back(i);
      if (opt.size() > 20) throw GrammarError("too many nullable symbols in one production");
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << opt.size()); ++mask) {
        Production q{p.lhs, {}, std::nullopt};
        std::size_t o = 0;
        for (std::size_t i = 0; i < p.rhs.size(); ++i) {
          if (o < opt.size() && opt[o] == i) {
            bool drop = (mask >> o) & 1;
            ++o;
            if (drop) continue;
          }
          q.rhs.push_back(p.rhs[i]);
        }
        if (q.rhs.empty()) continue;
        if (std::none_of(expanded.begin(), expanded.end(),
                         [&](const Production& e) { return same_rhs(e, q); }))
          expanded.push_back(std::move(q));
      }
    }
    if (nullable[g.start()]) expanded.push_back(Production{g.start(), {}, std::nullopt});

    // unit elimination through the unit-derivation closure
    const std::size_t nn = g.num_nonterminals();
    std::vector<std::vector<char>> unit(nn, std::vector<char>(nn, 0));
    for (std::size_t a = 0; a < nn; ++a) unit[a][a] = 1;
    for (bool changed = true; changed;) {
      changed = false;
      for (const Production& p : expanded)
        if (p.is_unit())
          for (std::size_t a = 0; a < nn; ++a)
            if (unit[a][p.lhs] && !unit[a][p.rhs[0].id]) {
              unit[a][p.rhs[0].id] = 1;
              changed = true;
            }
    }
    std::vector<Production> no_units;
    for (std::size_t a = 0; a < nn; ++a)
      for (const Production& p : expanded) {
        if (p.is_unit() || !unit[a][p.lhs]) continue;
        if (p.is_epsilon() && a != g.start()) continue;
        Production q{static_cast<NonterminalId>(a), p.rhs, std::nullopt};
        if (std::none_of(no_units.begin(), no_units.end(),
                         [&](const Production& e) { return same_rhs(e, q); }))
          no_units.push_back(std::move(q));
      }
    rules = std::move(no_units);
  } else {
    for (const Production& p : rules)
      if (p.is_epsilon() || p.is_unit())
        throw GrammarError("stochastic grammar with epsilon or unit rules cannot be converted");
  }

  // lift terminals out of long rules, then binarize
  std::map<TerminalId, NonterminalId> lifted;
  std::vector<Production> out_rules;
  std::vector<Production> lift_rules;
  auto lift = [&](TerminalId t) {
    auto it = lifted.find(t);
    if (it != lifted.end()) return it->second;
    NonterminalId x = g.fresh_nonterminal("T_" + g.terminal_name(t));
    lifted.emplace(t, x);
    lift_rules.push_back(Production{x, {Symbol::t(t)},
                                    stochastic ? std::optional<Rational>(1) : std::nullopt});
    return x;
  };
  for (Production& p : rules) {
    if (p.rhs.size() <= 1) {
      out_rules.push_back(std::move(p));
      continue;
    }
    for (Symbol& s : p.rhs)
      if (s.is_terminal()) s = Symbol::nt(lift(s.id));
    NonterminalId lhs = p.lhs;
    std::optional<Rational> prob = p.prob;
    for (std::size_t i = 0; i + 2 < p.rhs.size(); ++i) {
      NonterminalId next = g.fresh_nonterminal(g.nonterminal_name(p.lhs) + "'");
      out_rules.push_back(Production{lhs, {p.rhs[i], Symbol::nt(next)}, prob});
      lhs = next;
      prob = stochastic ? std::optional<Rational>(1) : std::nullopt;
    }
    out_rules.push_back(
        Production{lhs, {p.rhs[p.rhs.size() - 2], p.rhs[p.rhs.size() - 1]}, prob});
  }
  for (Production& p : lift_rules) out_rules.push_back(std::move(p));

  Grammar out = empty_like(g);
  for (Production& p : out_rules) out.add_production(std::move(p));
  return prune_unreachable(out);
}

}  // namespace lanedit
