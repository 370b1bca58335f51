#include "lanedit/tuplemat.hpp"

#include "lanedit/errors.hpp"

#include <algorithm>
#include <unordered_set>

namespace lanedit {

bool better_entry(const TupleEntry& cand, const TupleEntry& cur) {
  if (cand.score != cur.score) return cand.score < cur.score;
  if (cand.back.production != cur.back.production) return cand.back.production < cur.back.production;
  return cand.back.split < cur.back.split;
}

const TupleEntry* TupleCell::find(NonterminalId a) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), a,
                             [](const TupleEntry& e, NonterminalId x) { return e.nt < x; });
  return it != entries_.end() && it->nt == a ? &*it : nullptr;
}

TupleEntry* TupleCell::find(NonterminalId a) {
  return const_cast<TupleEntry*>(static_cast<const TupleCell*>(this)->find(a));
}

bool TupleCell::offer(const TupleEntry& e) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), e.nt,
                             [](const TupleEntry& x, NonterminalId a) { return x.nt < a; });
  if (it != entries_.end() && it->nt == e.nt) {
    if (!better_entry(e, *it)) return false;
    *it = e;
    return true;
  }
  entries_.insert(it, e);
  return true;
}

void TupleCell::merge(const TupleCell& other) {
  for (const TupleEntry& e : other) offer(e);
}

void TupleCell::erase_above(double cap) {
  std::erase_if(entries_, [cap](const TupleEntry& e) { return e.score > cap; });
}

bool TupleCell::same_scores(const TupleCell& other) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].nt != other.entries_[i].nt || entries_[i].score != other.entries_[i].score) return false;
  return true;
}

TupleMatrix TupleMatrix::block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const {
  TupleMatrix out(r1 - r0, c1 - c0, cap_);
  for (std::size_t i = r0; i < r1; ++i)
    for (std::size_t j = c0; j < c1; ++j) out.cell(i - r0, j - c0) = cell(i, j);
  return out;
}

bool TupleMatrix::same_scores(const TupleMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) return false;
  for (std::size_t k = 0; k < cells_.size(); ++k)
    if (!cells_[k].same_scores(other.cells_[k])) return false;
  return true;
}

TupleMatrix string_matrix(const TerminalString& s, const ScoredGrammar& ge, double cap) {
  TupleMatrix b(s.size() + 1, cap);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= ge.num_terminals())
      throw UnknownSymbolError("symbol id " + std::to_string(s[i]) + " outside the scored grammar's alphabet");
    for (ProductionIndex p : ge.terminal_rules(s[i])) {
      const ScoredProduction& sp = ge[p];
      if (sp.score > cap) continue;
      TupleEntry e{sp.production.lhs, sp.score, {Backpointer::Kind::leaf, p, static_cast<std::uint32_t>(i), 0, 0}};
      b.cell(i, i + 1).offer(e);
    }
  }
  return b;
}

std::vector<std::pair<NonterminalId, double>> op_r(std::pair<NonterminalId, double> a,
                                                   std::pair<NonterminalId, double> b, const ScoredGrammar& ge,
                                                   double cap) {
  std::vector<std::pair<NonterminalId, double>> out;
  if (a.first >= ge.num_nonterminals()) return out;
  for (ProductionIndex p : ge.binary_by_left(a.first)) {
    const ScoredProduction& sp = ge[p];
    if (sp.production.rhs[1].id != b.first) continue;
    double x = a.second + b.second + sp.score;
    if (x <= cap) out.emplace_back(sp.production.lhs, x);
  }
  return out;
}

TupleCell elem_mult(const TupleCell& t1, const TupleCell& t2, const ScoredGrammar& ge, double cap,
                    std::uint32_t split) {
  TupleCell out;
  for (const TupleEntry& a : t1)
    for (ProductionIndex p : ge.binary_by_left(a.nt)) {
      const ScoredProduction& sp = ge[p];
      const TupleEntry* b = t2.find(sp.production.rhs[1].id);
      if (!b) continue;
      double x = a.score + b->score + sp.score;
      if (x > cap) continue;
      out.offer(TupleEntry{sp.production.lhs, x, {Backpointer::Kind::binary, p, split, a.score, b->score}});
    }
  return out;
}

const char* to_string(Backend b) {
  switch (b) {
    case Backend::naive: return "naive";
    case Backend::boolean: return "boolean";
    case Backend::bigint: return "bigint";
  }
  return "?";
}

namespace {

struct ReplayState {
  const TupleMatrix& m;
  const ScoredGrammar& ge;
  const DeletionSet* dn;
  Derivation& out;
  std::unordered_set<std::size_t> touched;
  std::size_t budget;

  int add(DerivationNode n) {
    if (out.nodes.size() >= budget) throw InvalidArgument("derivation replay does not terminate");
    out.nodes.push_back(n);
    return static_cast<int>(out.nodes.size() - 1);
  }

  int epsilon(NonterminalId a, std::size_t pos) {
    if (!dn || !dn->contains(a)) throw InvalidArgument("epsilon derivation missing for " + ge.nonterminal_name(a));
    ProductionIndex p = *dn->entries[a].production;
    int id = add(DerivationNode{a, p, pos, pos, -1, -1});
    const Production& r = ge[p].production;
    if (r.is_binary()) {
      int l = epsilon(r.rhs[0].id, pos);
      int rr = epsilon(r.rhs[1].id, pos);
      out.nodes[id].left = l;
      out.nodes[id].right = rr;
    }
    return id;
  }

  int span(std::size_t i, std::size_t j, NonterminalId a) {
    touched.insert(i * m.cols() + j);
    const TupleEntry* e = m.cell(i, j).find(a);
    if (!e) throw InvalidArgument("no entry for " + ge.nonterminal_name(a) + " at (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
    const Backpointer& bp = e->back;
    const Production& r = ge[bp.production].production;
    int id = add(DerivationNode{a, bp.production, i, j, -1, -1});
    int l = -1, rr = -1;
    switch (bp.kind) {
      case Backpointer::Kind::none:
        throw InvalidArgument("entry without backpointer");
      case Backpointer::Kind::leaf:
        break;
      case Backpointer::Kind::binary:
        l = span(i, bp.split, r.rhs[0].id);
        rr = span(bp.split, j, r.rhs[1].id);
        break;
      case Backpointer::Kind::dn_left:
        l = epsilon(r.rhs[0].id, i);
        rr = span(i, j, r.rhs[1].id);
        break;
      case Backpointer::Kind::dn_right:
        l = span(i, j, r.rhs[0].id);
        rr = epsilon(r.rhs[1].id, j);
        break;
    }
    out.nodes[id].left = l;
    out.nodes[id].right = rr;
    return id;
  }
};

}  // namespace

Derivation replay(const TupleMatrix& m, const ScoredGrammar& ge, const DeletionSet* deletions, std::size_t i,
                  std::size_t j, NonterminalId nt) {
  Derivation d;
  std::size_t budget = 64 * (m.rows() + 1) * (ge.num_nonterminals() + 1) + 1024;
  ReplayState st{m, ge, deletions, d, {}, budget};
  st.span(i, j, nt);
  d.cells_touched = st.touched.size();
  d.score = derivation_score(d, ge);
  return d;
}

double derivation_score(const Derivation& d, const ScoredGrammar& ge) {
  double total = 0;
  for (const DerivationNode& n : d.nodes)
    if (n.production) total += ge[*n.production].score;
  return total;
}

}  // namespace lanedit
