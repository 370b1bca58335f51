#include "lanedit/closure.hpp"

#include "lanedit/errors.hpp"

#include <functional>

namespace lanedit {

namespace {

using Kind = Backpointer::Kind;

// Does following same-cell epsilon backpointers from `from` reach `target`?
bool chain_reaches(const TupleCell& cell, const ScoredGrammar& ge, NonterminalId from, NonterminalId target) {
  NonterminalId cur = from;
  for (std::size_t steps = 0; steps <= cell.size(); ++steps) {
    if (cur == target) return true;
    const TupleEntry* e = cell.find(cur);
    if (!e) return false;
    const Production& r = ge[e->back.production].production;
    if (e->back.kind == Kind::dn_left)
      cur = r.rhs[1].id;
    else if (e->back.kind == Kind::dn_right)
      cur = r.rhs[0].id;
    else
      return false;
  }
  return true;
}

// One pass builds every D_n·x and x·D_n candidate from the current cell, optionally
// rounds them, then merges them without closing a same-cell epsilon cycle.
std::size_t saturate_cell(TupleCell& cell, const ScoredGrammar& ge, const DeletionSet& dn, double cap,
                          std::size_t limit, const std::function<void(TupleCell&)>& round) {
  std::size_t used = 0;
  for (std::size_t pass = 0; pass < limit; ++pass) {
    TupleCell cand;
    for (const TupleEntry& x : cell) {
      for (ProductionIndex p : ge.binary_by_right(x.nt)) {
        const ScoredProduction& sp = ge[p];
        NonterminalId d = sp.production.rhs[0].id;
        if (!dn.contains(d)) continue;
        double s = dn.score(d) + x.score + sp.score;
        if (s <= cap) cand.offer(TupleEntry{sp.production.lhs, s, {Kind::dn_left, p, 0, dn.score(d), x.score}});
      }
      for (ProductionIndex p : ge.binary_by_left(x.nt)) {
        const ScoredProduction& sp = ge[p];
        NonterminalId d = sp.production.rhs[1].id;
        if (!dn.contains(d)) continue;
        double s = x.score + dn.score(d) + sp.score;
        if (s <= cap) cand.offer(TupleEntry{sp.production.lhs, s, {Kind::dn_right, p, 1, x.score, dn.score(d)}});
      }
    }
    if (round) round(cand);
    bool changed = false;
    for (const TupleEntry& e : cand) {
      const TupleEntry* cur = cell.find(e.nt);
      if (cur && !better_entry(e, *cur)) continue;
      const Production& r = ge[e.back.production].production;
      NonterminalId child = e.back.kind == Kind::dn_left ? r.rhs[1].id : r.rhs[0].id;
      if (chain_reaches(cell, ge, child, e.nt)) continue;
      changed |= cell.offer(e);
    }
    if (!changed) break;
    ++used;
  }
  return used;
}

class Engine {
 public:
  Engine(const TupleMatrix& input, const ScoredGrammar& ge, const ClosureConfig& cfg)
      : ge_(ge), cfg_(cfg), n_(input.dim()), T_(input.dim(), cfg.cap), P_(input), counter_(n_ * n_, 0) {
    if (input.rows() != input.cols()) throw InvalidArgument("closure needs a square matrix");
    if (cfg.base_block < 2) throw InvalidArgument("base_block must be at least 2");
    P_.set_cap(cfg.cap);
    passes_ = cfg.max_saturation_passes ? cfg.max_saturation_passes : std::max<std::size_t>(ge.size(), 1);
    if (cfg.rounding) {
      if (cfg.cap > cfg.rounding->grid.top()) throw InvalidArgument("rounded closure needs cap <= top grid level");
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) {
          TupleCell& c = P_.cell(i, j);
          round_cell(c, i, j);
          c.erase_above(cfg.cap);
        }
    } else {
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) P_.cell(i, j).erase_above(cfg.cap);
    }
    product_opts_ = cfg.product;
    if (cfg.rounding && cfg.rounding->style == RoundingConfig::Style::scfg) {
      product_opts_.combine = [this](std::size_t row, std::size_t col, ProductionIndex p, double t) {
        const RoundingConfig& rc = *cfg_.rounding;
        std::uint64_t ctr = counter_[row * n_ + col];
        std::uint64_t slot = ge_.num_nonterminals() + 3 * static_cast<std::uint64_t>(p);
        double rt = round_score(t, rc.grid, keyed_uniform(rc.seed, row, col, ctr, slot));
        double ru = round_score(ge_[p].score, rc.grid, keyed_uniform(rc.seed, row, col, ctr, slot + 1));
        return round_score(rt + ru, rc.grid, keyed_uniform(rc.seed, row, col, ctr, slot + 2));
      };
    }
  }

  TupleMatrix run_naive() {
    dp_range(0, n_);
    return std::move(T_);
  }

  TupleMatrix run_valiant() {
    compute(0, n_);
    return std::move(T_);
  }

 private:
  void round_cell(TupleCell& c, std::size_t i, std::size_t j) {
    const RoundingConfig& rc = *cfg_.rounding;
    std::uint64_t& ctr = counter_[i * n_ + j];
    for (TupleEntry& e : c.raw())
      if (e.score != 0) e.score = round_score(e.score, rc.grid, keyed_uniform(rc.seed, i, j, ctr, e.nt));
    ++ctr;
  }

  // Adds a product result to P(i, j), rounding it first in the ⁺⁺ variant.
  void absorb(std::size_t i, std::size_t j, TupleCell cand) {
    if (cand.empty()) return;
    if (cfg_.rounding) round_cell(cand, i, j);
    P_.cell(i, j).merge(cand);
  }

  void finalize(std::size_t i, std::size_t j, const std::vector<std::pair<std::size_t, std::size_t>>& ranges) {
    TupleCell cand = cell_product(T_, i, j, ranges, ge_, cfg_.cap, product_opts_);
    absorb(i, j, std::move(cand));
    TupleCell& t = T_.cell(i, j);
    t = P_.cell(i, j);
    if (cfg_.dn) saturate(t, i, j);
    t.erase_above(cfg_.cap);
  }

  void saturate(TupleCell& cell, std::size_t i, std::size_t j) {
    if (cfg_.rounding)
      saturate_cell(cell, ge_, *cfg_.dn, cfg_.cap, passes_, [&](TupleCell& c) { round_cell(c, i, j); });
    else
      saturate_cell(cell, ge_, *cfg_.dn, cfg_.cap, passes_, nullptr);
  }

  // Plain span DP restricted to positions [a, d).
  void dp_range(std::size_t a, std::size_t d) {
    for (std::size_t len = 1; len < d - a; ++len)
      for (std::size_t i = a; i + len < d; ++i) finalize(i, i + len, {{i + 1, i + len}});
  }

  void compute(std::size_t a, std::size_t d) {
    if (d - a <= cfg_.base_block) {
      dp_range(a, d);
      return;
    }
    std::size_t mid = (a + d) / 2;
    compute(a, mid);
    compute(mid, d);
    complete(a, mid, mid, d);
  }

  // Rows [a,b) x cols [c,d). T is closed inside [a,b) and [c,d); P holds products for k in [b,c).
  void complete(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    if (b - a <= cfg_.base_block && d - c <= cfg_.base_block) {
      for (std::size_t i = b; i-- > a;)
        for (std::size_t j = c; j < d; ++j) finalize(i, j, {{i + 1, b}, {c, j}});
      return;
    }
    if (b - a > 1) {
      std::size_t am = (a + b) / 2;
      complete(am, b, c, d);
      block_product(a, am, am, b, c, d);
      complete(a, am, c, d);
    } else {
      std::size_t cm = (c + d) / 2;
      complete(a, b, c, cm);
      block_product(a, b, c, cm, cm, d);
      complete(a, b, cm, d);
    }
  }

  // P[r0..r1, c0..c1] ∪= T[r0..r1, m0..m1] · T[m0..m1, c0..c1]
  void block_product(std::size_t r0, std::size_t r1, std::size_t m0, std::size_t m1, std::size_t c0,
                     std::size_t c1) {
    ProductOptions opts = product_opts_;
    opts.row_offset = r0;
    opts.mid_offset = m0;
    opts.col_offset = c0;
    TupleMatrix z = matrix_mult(T_.block(r0, r1, m0, m1), T_.block(m0, m1, c0, c1), ge_, cfg_.cap, opts);
    for (std::size_t i = r0; i < r1; ++i)
      for (std::size_t j = c0; j < c1; ++j) absorb(i, j, std::move(z.cell(i - r0, j - c0)));
  }

  const ScoredGrammar& ge_;
  const ClosureConfig& cfg_;
  std::size_t n_;
  TupleMatrix T_;
  TupleMatrix P_;
  std::vector<std::uint64_t> counter_;
  std::size_t passes_ = 1;
  ProductOptions product_opts_;
};

}  // namespace

std::size_t dn_saturate(TupleCell& cell, const ScoredGrammar& ge, const DeletionSet& dn, double cap,
                        std::size_t max_passes) {
  std::size_t limit = max_passes ? max_passes : std::max<std::size_t>(ge.size(), 1);
  std::size_t used = saturate_cell(cell, ge, dn, cap, limit, nullptr);
  cell.erase_above(cap);
  return used;
}

void dn_saturate(TupleMatrix& m, const ScoredGrammar& ge, const DeletionSet& dn, double cap, std::size_t max_passes) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) dn_saturate(m.cell(i, j), ge, dn, cap, max_passes);
}

TupleMatrix closure_naive(const TupleMatrix& b, const ScoredGrammar& ge, const ClosureConfig& cfg) {
  ClosureConfig local = cfg;
  local.rounding.reset();
  return Engine(b, ge, local).run_naive();
}

TupleMatrix closure_valiant(const TupleMatrix& b, const ScoredGrammar& ge, const ClosureConfig& cfg) {
  ClosureConfig local = cfg;
  local.rounding.reset();
  return Engine(b, ge, local).run_valiant();
}

TupleMatrix closure(const TupleMatrix& b, const ScoredGrammar& ge, const ClosureConfig& cfg) {
  return cfg.algorithm == ClosureAlgorithm::naive ? closure_naive(b, ge, cfg) : closure_valiant(b, ge, cfg);
}

TupleMatrix closure_plus_plus(const TupleMatrix& m0, const ScoredGrammar& ge, const ClosureConfig& cfg) {
  if (!cfg.rounding) throw InvalidArgument("closure_plus_plus needs a rounding configuration");
  Engine e(m0, ge, cfg);
  return cfg.algorithm == ClosureAlgorithm::naive ? e.run_naive() : e.run_valiant();
}

}  // namespace lanedit
