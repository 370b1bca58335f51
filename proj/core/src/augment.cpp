#include "lanedit/augment.hpp"

#include "lanedit/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace lanedit {

const char* to_string(RuleKind k) {
  switch (k) {
    case RuleKind::original: return "original";
    case RuleKind::elem_subst: return "elem_subst";
    case RuleKind::elem_insert: return "elem_insert";
    case RuleKind::elem_delete: return "elem_delete";
    case RuleKind::insert_glue: return "insert_glue";
    case RuleKind::subst_header: return "subst_header";
  }
  return "?";
}

ScoredGrammar::ScoredGrammar(Grammar base) : base_(std::move(base)) {
  if (!base_.is_cnf()) throw GrammarError("scored grammars are built from CNF grammars");
  for (std::size_t i = 0; i < base_.num_nonterminals(); ++i)
    names_.push_back(base_.nonterminal_name(static_cast<NonterminalId>(i)));
  terminal_count_ = base_.num_terminals();
  by_left_.resize(names_.size());
  by_right_.resize(names_.size());
  by_terminal_.resize(terminal_count_);
}

NonterminalId ScoredGrammar::add_nonterminal(std::string name) {
  auto id = static_cast<NonterminalId>(names_.size());
  names_.push_back(std::move(name));
  by_left_.emplace_back();
  by_right_.emplace_back();
  return id;
}

void ScoredGrammar::set_terminal_count(std::size_t n) {
  terminal_count_ = std::max(terminal_count_, n);
  if (by_terminal_.size() < terminal_count_) by_terminal_.resize(terminal_count_);
}

void ScoredGrammar::add(ScoredProduction p) {
  const Production& r = p.production;
  if (r.lhs >= names_.size()) throw GrammarError("scored rule with unknown lhs");
  for (const Symbol& s : r.rhs) {
    if (s.is_nonterminal() && s.id >= names_.size()) throw GrammarError("scored rule with unknown nonterminal");
    if (s.is_terminal() && s.id >= terminal_count_) throw GrammarError("scored rule with unknown terminal");
  }
  if (!(r.is_binary() || r.is_terminal_rule() || r.is_epsilon()))
    throw GrammarError("scored rules must be in CNF");
  for (ProductionIndex i = 0; i < productions_.size(); ++i) {
    ScoredProduction& q = productions_[i];
    if (q.production.lhs == r.lhs && q.production.rhs == r.rhs) {
      if (p.score < q.score) q = std::move(p);
      return;
    }
  }
  auto idx = static_cast<ProductionIndex>(productions_.size());
  if (r.is_binary()) {
    by_left_[r.rhs[0].id].push_back(idx);
    by_right_[r.rhs[1].id].push_back(idx);
    binary_.push_back(idx);
  } else if (r.is_terminal_rule()) {
    by_terminal_[r.rhs[0].id].push_back(idx);
  } else {
    epsilon_.push_back(idx);
  }
  productions_.push_back(std::move(p));
}

const std::vector<ProductionIndex>& ScoredGrammar::terminal_rules(TerminalId t) const {
  static const std::vector<ProductionIndex> kNone;
  return t < by_terminal_.size() ? by_terminal_[t] : kNone;
}

std::string ScoredGrammar::to_text() const {
  std::ostringstream out;
  for (const ScoredProduction& p : productions_) {
    out << names_[p.production.lhs] << " ->";
    if (p.production.rhs.empty()) out << " EPS";
    for (const Symbol& s : p.production.rhs) {
      if (s.is_nonterminal())
        out << ' ' << names_[s.id];
      else if (s.id < base_.num_terminals())
        out << ' ' << base_.terminal_name(s.id);
      else
        out << " #" << s.id;
    }
    out << "  (" << p.score << ", " << to_string(p.kind) << ")\n";
  }
  return out.str();
}

ScoredGrammar scored_from_cnf(const Grammar& cnf, bool use_probabilities) {
  ScoredGrammar sg(cnf);
  for (const Production& p : cnf.productions()) {
    double score = 0;
    if (use_probabilities) {
      if (!p.prob) throw DistributionError("production without probability");
      score = -log2_rational(*p.prob);
      if (score == 0.0) score = 0.0;  // normalize -0
    }
    sg.add(ScoredProduction{p, score, RuleKind::original, std::nullopt});
  }
  return sg;
}

std::vector<TerminalId> working_alphabet(const Grammar& g, const TerminalString& s) {
  std::set<TerminalId> sigma;
  for (TerminalId t = 0; t < g.num_terminals(); ++t) sigma.insert(t);
  sigma.insert(s.begin(), s.end());
  return {sigma.begin(), sigma.end()};
}

ScoredGrammar build_error_grammar(const Grammar& cnf, const std::vector<TerminalId>& sigma) {
  ScoredGrammar ge = scored_from_cnf(cnf);
  TerminalId max_t = 0;
  for (TerminalId t : sigma) max_t = std::max(max_t, t + 1);
  ge.set_terminal_count(max_t);

  const std::size_t base_nts = cnf.num_nonterminals();
  std::vector<std::set<TerminalId>> direct(base_nts);
  std::vector<std::optional<TerminalId>> first_terminal(base_nts);
  for (const Production& p : cnf.productions())
    if (p.is_terminal_rule()) {
      direct[p.lhs].insert(p.rhs[0].id);
      if (!first_terminal[p.lhs]) first_terminal[p.lhs] = p.rhs[0].id;
    }

  std::string iname = "I";
  while (cnf.find_nonterminal(iname)) iname += "'";
  const NonterminalId ins = ge.add_nonterminal(iname);
  ge.set_insert_nonterminal(ins);

  // substitution: A -> y for every y the rule set of A does not already produce
  for (NonterminalId a = 0; a < base_nts; ++a) {
    if (!first_terminal[a]) continue;
    for (TerminalId y : sigma)
      if (!direct[a].count(y))
        ge.add(ScoredProduction{Production{a, {Symbol::t(y)}, std::nullopt}, 1, RuleKind::elem_subst,
                                first_terminal[a]});
  }
  // insertion of extra input symbols
  for (TerminalId x : sigma)
    ge.add(ScoredProduction{Production{ins, {Symbol::t(x)}, std::nullopt}, 1, RuleKind::elem_insert,
                            std::nullopt});
  for (NonterminalId a = 0; a < base_nts; ++a) {
    ge.add(ScoredProduction{Production{a, {Symbol::nt(ins), Symbol::nt(a)}, std::nullopt}, 0,
                            RuleKind::insert_glue, std::nullopt});
    ge.add(ScoredProduction{Production{a, {Symbol::nt(a), Symbol::nt(ins)}, std::nullopt}, 0,
                            RuleKind::insert_glue, std::nullopt});
  }
  ge.add(ScoredProduction{Production{ins, {Symbol::nt(ins), Symbol::nt(ins)}, std::nullopt}, 0,
                          RuleKind::insert_glue, std::nullopt});
  // deletion: a grammar symbol missing from the input
  for (NonterminalId a = 0; a < base_nts; ++a)
    if (first_terminal[a])
      ge.add(ScoredProduction{Production{a, {}, std::nullopt}, 1, RuleKind::elem_delete,
                              first_terminal[a]});
  return ge;
}

std::size_t DeletionSet::count() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(),
                                                [](const DeletionEntry& e) { return e.production.has_value(); }));
}

bool DeletionSet::same_scores(const DeletionSet& other) const {
  if (entries.size() != other.entries.size()) return false;
  for (std::size_t a = 0; a < entries.size(); ++a)
    if (entries[a].production.has_value() != other.entries[a].production.has_value() ||
        entries[a].score != other.entries[a].score)
      return false;
  return true;
}

namespace {

bool improves(const DeletionEntry& cur, double score, ProductionIndex prod) {
  if (!cur.production) return true;
  if (score != cur.score) return score < cur.score;
  return prod < *cur.production;
}

DeletionSet first_set(const ScoredGrammar& ge) {
  DeletionSet d;
  d.index = 1;
  d.entries.resize(ge.num_nonterminals());
  for (ProductionIndex p : ge.epsilon_rules()) {
    const ScoredProduction& sp = ge[p];
    DeletionEntry& e = d.entries[sp.production.lhs];
    if (improves(e, sp.score, p)) e = DeletionEntry{sp.score, p};
  }
  return d;
}

DeletionSet next_set(const ScoredGrammar& ge, const DeletionSet& prev) {
  DeletionSet d = prev;
  d.index = prev.index + 1;
  for (ProductionIndex p : ge.binary_rules()) {
    const ScoredProduction& sp = ge[p];
    NonterminalId b = sp.production.rhs[0].id, c = sp.production.rhs[1].id;
    if (!prev.contains(b) || !prev.contains(c)) continue;
    double score = prev.entries[b].score + prev.entries[c].score + sp.score;
    DeletionEntry& e = d.entries[sp.production.lhs];
    if (score < e.score || !e.production) e = DeletionEntry{score, p};
  }
  return d;
}

}  // namespace

std::vector<DeletionSet> deletion_sets(const ScoredGrammar& ge, std::size_t n) {
  if (n == 0) throw InvalidArgument("deletion_sets needs n >= 1");
  std::vector<DeletionSet> out;
  out.push_back(first_set(ge));
  bool fixed = false;
  while (out.size() < n) {
    if (fixed) {
      DeletionSet d = out.back();
      d.index = out.size() + 1;
      out.push_back(std::move(d));
      continue;
    }
    DeletionSet d = next_set(ge, out.back());
    fixed = d.same_scores(out.back());
    out.push_back(std::move(d));
  }
  return out;
}

DeletionSet deletion_set_final(const ScoredGrammar& ge, std::size_t n) {
  if (n == 0) throw InvalidArgument("deletion_set_final needs n >= 1");
  DeletionSet d = first_set(ge);
  while (d.index < n) {
    DeletionSet next = next_set(ge, d);
    if (next.same_scores(d)) {
      d.index = n;
      break;
    }
    d = std::move(next);
  }
  return d;
}

}  // namespace lanedit
