#include "lanedit/errors.hpp"
#include "lanedit/tuplemat.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lanedit {

namespace {

using Kind = Backpointer::Kind;

void emit(TupleCell& out, const ScoredGrammar& ge, double cap, const ProductOptions& opts, std::size_t i,
          std::size_t j, ProductionIndex p, double t, std::size_t k, double u, double v) {
  const ScoredProduction& sp = ge[p];
  double score = opts.combine ? opts.combine(opts.row_offset + i, opts.col_offset + j, p, t) : t + sp.score;
  if (score > cap) return;
  out.offer(TupleEntry{sp.production.lhs, score,
                       {Kind::binary, p, static_cast<std::uint32_t>(opts.mid_offset + k), u, v}});
}

// Smallest k with a(i,k)[A] + b(k,j)[B] == t; the algebraic backends know only t.
void emit_with_witness(TupleCell& out, const TupleMatrix& a, const TupleMatrix& b, const ScoredGrammar& ge,
                       double cap, const ProductOptions& opts, std::size_t i, std::size_t j, ProductionIndex p,
                       double t) {
  const Production& r = ge[p].production;
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const TupleEntry* x = a.cell(i, k).find(r.rhs[0].id);
    if (!x) continue;
    const TupleEntry* y = b.cell(k, j).find(r.rhs[1].id);
    if (!y || x->score + y->score != t) continue;
    emit(out, ge, cap, opts, i, j, p, t, k, x->score, y->score);
    return;
  }
  throw std::logic_error("algebraic product reported a sum with no witness");
}

TupleMatrix naive_product(const TupleMatrix& a, const TupleMatrix& b, const ScoredGrammar& ge, double cap,
                          const ProductOptions& opts) {
  TupleMatrix c(a.rows(), b.cols(), cap);
  const std::size_t np = ge.size();
  std::vector<double> best_t(np, kInfinity);
  std::vector<std::uint32_t> best_k(np, 0);
  std::vector<ProductionIndex> touched;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      touched.clear();
      for (std::size_t k = 0; k < a.cols(); ++k) {
        const TupleCell& left = a.cell(i, k);
        if (left.empty()) continue;
        const TupleCell& right = b.cell(k, j);
        if (right.empty()) continue;
        for (const TupleEntry& x : left)
          for (ProductionIndex p : ge.binary_by_left(x.nt)) {
            const TupleEntry* y = right.find(ge[p].production.rhs[1].id);
            if (!y) continue;
            double t = x.score + y->score;
            if (t < best_t[p]) {
              if (best_t[p] == kInfinity) touched.push_back(p);
              best_t[p] = t;
              best_k[p] = static_cast<std::uint32_t>(k);
            }
          }
      }
      std::sort(touched.begin(), touched.end());
      TupleCell& out = c.cell(i, j);
      for (ProductionIndex p : touched) {
        std::size_t k = best_k[p];
        const Production& r = ge[p].production;
        double u = a.cell(i, k).find(r.rhs[0].id)->score;
        double v = b.cell(k, j).find(r.rhs[1].id)->score;
        emit(out, ge, cap, opts, i, j, p, best_t[p], k, u, v);
        best_t[p] = kInfinity;
      }
    }
  return c;
}

std::vector<double> distinct_values(const TupleMatrix& a, const TupleMatrix& b) {
  std::vector<double> v;
  for (const TupleMatrix* m : {&a, &b})
    for (std::size_t i = 0; i < m->rows(); ++i)
      for (std::size_t j = 0; j < m->cols(); ++j)
        for (const TupleEntry& e : m->cell(i, j)) v.push_back(e.score);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void check_compatible(const TupleMatrix& a, const TupleMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("matrix_mult: incompatible dimensions");
}

using Bits = std::vector<std::uint64_t>;

bool intersects(const Bits& x, const Bits& y) {
  for (std::size_t w = 0; w < x.size(); ++w)
    if (x[w] & y[w]) return true;
  return false;
}

TupleMatrix bigint_product(const TupleMatrix& a, const TupleMatrix& b, const ScoredGrammar& ge, double cap,
                           const ProductOptions& opts) {
  const std::size_t h = ge.num_nonterminals();
  const std::size_t K = a.cols();
  std::vector<double> values = distinct_values(a, b);
  TupleMatrix c(a.rows(), b.cols(), cap);
  if (values.empty()) return c;

  std::optional<SidonMap> sidon;
  auto encode = [&](double s) -> std::int64_t {
    if (sidon) return static_cast<std::int64_t>(sidon->code_of(s));
    return static_cast<std::int64_t>(s);
  };
  std::int64_t bound = 0;
  if (opts.use_sidon) {
    sidon.emplace(values);
    bound = static_cast<std::int64_t>(sidon->codes().back());
  } else {
    for (double s : values)
      if (s < 0 || s != std::floor(s) || s > 1e15)
        throw InvalidArgument("bigint backend needs small non-negative integer scores; enable the Sidon mapping");
    bound = static_cast<std::int64_t>(values.back());
  }

  if (a.rows() * h > opts.max_expanded_dim || b.cols() * h > opts.max_expanded_dim)
    throw CapacityError("bigint backend: expanded dimension above the configured bound");
  IntMatrix ap(a.rows() * h, K), bp(K, b.cols() * h);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < K; ++k)
      for (const TupleEntry& e : a.cell(i, k)) ap(i * h + e.nt, k) = encode(e.score);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t j = 0; j < b.cols(); ++j)
      for (const TupleEntry& e : b.cell(k, j)) bp(k, j * h + e.nt) = encode(e.score);

  DistanceProduct dp = distance_product_bigint(ap, bp, bound, opts.bigint_bit_budget, opts.max_expanded_dim);

  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      TupleCell& out = c.cell(i, j);
      for (ProductionIndex p : ge.binary_rules()) {
        const Production& r = ge[p].production;
        std::size_t row = i * h + r.rhs[0].id, col = j * h + r.rhs[1].id;
        double t = kInfinity;
        if (!sidon) {
          if (!dp.min_sum(row, col)) continue;
          t = static_cast<double>(*dp.min_sum(row, col));
        } else {
          for (std::int64_t sum : dp.all_sums(row, col)) {
            auto pair = sidon->decompose_sum(static_cast<std::uint64_t>(sum));
            if (!pair) throw std::logic_error("Sidon sum without decomposition");
            t = std::min(t, sidon->values()[pair->first - 1] + sidon->values()[pair->second - 1]);
          }
          if (t == kInfinity) continue;
        }
        emit_with_witness(out, a, b, ge, cap, opts, i, j, p, t);
      }
    }
  return c;
}

}  // namespace

TupleMatrix tuple_product_boolean(const TupleMatrix& a, const TupleMatrix& b, const ScoredGrammar& ge,
                                  const std::vector<double>& values_in, double cap, const ProductOptions& opts) {
  check_compatible(a, b);
  std::vector<double> values = values_in;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  TupleMatrix c(a.rows(), b.cols(), cap);
  if (values.empty()) return c;

  const std::size_t h = ge.num_nonterminals();
  const std::size_t R1 = values.size();
  const std::size_t K = a.cols();
  const std::size_t words = (K + 63) / 64;
  if (a.rows() * h * R1 > opts.max_expanded_dim || b.cols() * h * R1 > opts.max_expanded_dim)
    throw CapacityError("boolean backend: expanded dimension above the configured bound");

  auto value_index = [&](double s) {
    auto it = std::lower_bound(values.begin(), values.end(), s);
    if (it == values.end() || *it != s) throw InvalidArgument("score missing from the declared value list");
    return static_cast<std::size_t>(it - values.begin());
  };

  // row (i, A, x) of a' holds the k with a(i,k) containing (A, v_x); columns of b' likewise
  std::vector<Bits> ap(a.rows() * h * R1, Bits(words, 0));
  std::vector<Bits> bp(b.cols() * h * R1, Bits(words, 0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < K; ++k)
      for (const TupleEntry& e : a.cell(i, k))
        ap[(i * h + e.nt) * R1 + value_index(e.score)][k / 64] |= std::uint64_t{1} << (k % 64);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t j = 0; j < b.cols(); ++j)
      for (const TupleEntry& e : b.cell(k, j))
        bp[(j * h + e.nt) * R1 + value_index(e.score)][k / 64] |= std::uint64_t{1} << (k % 64);

  std::optional<SidonMap> sidon;
  if (opts.use_sidon) sidon.emplace(values);

  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      TupleCell& out = c.cell(i, j);
      for (ProductionIndex p : ge.binary_rules()) {
        const Production& r = ge[p].production;
        double t = kInfinity;
        for (std::size_t x = 0; x < R1; ++x) {
          const Bits& row = ap[(i * h + r.rhs[0].id) * R1 + x];
          for (std::size_t y = 0; y < R1; ++y) {
            if (!intersects(row, bp[(j * h + r.rhs[1].id) * R1 + y])) continue;
            double cand;
            if (sidon) {
              auto pair = sidon->decompose_sum(sidon->codes()[x] + sidon->codes()[y]);
              if (!pair) throw std::logic_error("Sidon sum without decomposition");
              cand = values[pair->first - 1] + values[pair->second - 1];
            } else {
              cand = values[x] + values[y];
            }
            t = std::min(t, cand);
          }
        }
        if (t == kInfinity) continue;
        emit_with_witness(out, a, b, ge, cap, opts, i, j, p, t);
      }
    }
  return c;
}

TupleCell cell_product(const TupleMatrix& m, std::size_t i, std::size_t j,
                       const std::vector<std::pair<std::size_t, std::size_t>>& k_ranges, const ScoredGrammar& ge,
                       double cap, const ProductOptions& opts) {
  thread_local std::vector<double> best_t;
  thread_local std::vector<std::uint32_t> best_k;
  thread_local std::vector<ProductionIndex> touched;
  if (best_t.size() < ge.size()) {
    best_t.assign(ge.size(), kInfinity);
    best_k.assign(ge.size(), 0);
  }
  touched.clear();
  for (auto [lo, hi] : k_ranges)
    for (std::size_t k = lo; k < hi; ++k) {
      const TupleCell& left = m.cell(i, k);
      if (left.empty()) continue;
      const TupleCell& right = m.cell(k, j);
      if (right.empty()) continue;
      for (const TupleEntry& x : left)
        for (ProductionIndex p : ge.binary_by_left(x.nt)) {
          const TupleEntry* y = right.find(ge[p].production.rhs[1].id);
          if (!y) continue;
          double t = x.score + y->score;
          if (t < best_t[p] || (t == best_t[p] && k < best_k[p])) {
            if (best_t[p] == kInfinity) touched.push_back(p);
            best_t[p] = t;
            best_k[p] = static_cast<std::uint32_t>(k);
          }
        }
    }
  std::sort(touched.begin(), touched.end());
  TupleCell out;
  ProductOptions local;
  local.combine = opts.combine;
  for (ProductionIndex p : touched) {
    std::size_t k = best_k[p];
    const Production& r = ge[p].production;
    double u = m.cell(i, k).find(r.rhs[0].id)->score;
    double v = m.cell(k, j).find(r.rhs[1].id)->score;
    emit(out, ge, cap, local, i, j, p, best_t[p], k, u, v);
    best_t[p] = kInfinity;
  }
  return out;
}

TupleMatrix matrix_mult(const TupleMatrix& a, const TupleMatrix& b, const ScoredGrammar& ge, double cap,
                        const ProductOptions& opts) {
  check_compatible(a, b);
  switch (opts.backend) {
    case Backend::naive: return naive_product(a, b, ge, cap, opts);
    case Backend::boolean: return tuple_product_boolean(a, b, ge, distinct_values(a, b), cap, opts);
    case Backend::bigint: return bigint_product(a, b, ge, cap, opts);
  }
  throw InvalidArgument("unknown backend");
}

DistanceProduct distance_product_bigint(const IntMatrix& a, const IntMatrix& b, std::int64_t value_bound,
                                        std::size_t bit_budget, std::size_t max_dim) {
  if (a.cols() != b.rows()) throw InvalidArgument("distance product: incompatible dimensions");
  if (value_bound < 0) throw InvalidArgument("distance product: negative value bound");
  if (a.rows() > max_dim || a.cols() > max_dim || b.cols() > max_dim)
    throw CapacityError("distance product: dimension above the configured bound");
  const std::size_t K = a.cols();
  const BigInt base = BigInt(K) + 1;
  const std::size_t top = static_cast<std::size_t>(2 * value_bound);
  double bits = static_cast<double>(top + 1) * std::log2(static_cast<double>(K + 1)) + 1;
  if (bits > static_cast<double>(bit_budget)) throw CapacityError("distance product: encoded entries exceed the bit budget");

  std::vector<BigInt> pw(top + 1);
  pw[0] = 1;
  for (std::size_t e = 1; e <= top; ++e) pw[e] = pw[e - 1] * base;

  auto check = [&](const IntEntry& x) {
    if (x && (*x < 0 || *x > value_bound)) throw InvalidArgument("distance product: entry outside [0, V]");
  };
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < K; ++k) check(a(i, k));
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t j = 0; j < b.cols(); ++j) check(b(k, j));

  DistanceProduct out{IntMatrix(a.rows(), b.cols()), Matrix<std::vector<std::int64_t>>(a.rows(), b.cols())};
  const auto V = static_cast<std::size_t>(value_bound);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      BigInt acc = 0;
      for (std::size_t k = 0; k < K; ++k) {
        if (!a(i, k) || !b(k, j)) continue;
        acc += pw[V - static_cast<std::size_t>(*a(i, k))] * pw[V - static_cast<std::size_t>(*b(k, j))];
      }
      // leading exponent first: the largest exponent is the smallest sum
      std::vector<std::int64_t>& sums = out.all_sums(i, j);
      while (acc > 0) {
        auto it = std::upper_bound(pw.begin(), pw.end(), acc);
        std::size_t e = static_cast<std::size_t>(it - pw.begin()) - 1;
        BigInt digit = acc / pw[e];
        acc -= digit * pw[e];
        sums.push_back(static_cast<std::int64_t>(top - e));
      }
      if (!sums.empty()) out.min_sum(i, j) = sums.front();
    }
  return out;
}

}  // namespace lanedit
