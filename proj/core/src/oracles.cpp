#include "lanedit/oracles.hpp"

#include "lanedit/errors.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace lanedit::oracle {

namespace {

struct StringHash {
  std::size_t operator()(const TerminalString& s) const {
    std::size_t h = 1469598103934665603ULL;
    for (TerminalId t : s) h = (h ^ t) * 1099511628211ULL;
    return h;
  }
};

}  // namespace

bool member_naive(const Grammar& g, const TerminalString& s) {
  const std::size_t n = s.size();
  const std::size_t nts = g.num_nonterminals();
  if (nts == 0) return false;
  // der[(i*(n+1)+j)*nts + A]: A derives s[i..j)
  std::vector<char> der((n + 1) * (n + 1) * nts, 0);
  auto at = [&](std::size_t i, std::size_t j, std::size_t a) -> char& { return der[(i * (n + 1) + j) * nts + a]; };

  for (std::size_t len = 0; len <= n; ++len) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i + len <= n; ++i) {
        const std::size_t j = i + len;
        for (const Production& p : g.productions()) {
          if (at(i, j, p.lhs)) continue;
          // positions reachable after reading a prefix of the right side
          std::vector<char> reach(n + 1, 0);
          reach[i] = 1;
          for (const Symbol& x : p.rhs) {
            std::vector<char> next(n + 1, 0);
            for (std::size_t q = i; q <= j; ++q) {
              if (!reach[q]) continue;
              if (x.is_terminal()) {
                if (q < j && s[q] == x.id) next[q + 1] = 1;
              } else {
                for (std::size_t r = q; r <= j; ++r)
                  if (at(q, r, x.id)) next[r] = 1;
              }
            }
            reach.swap(next);
          }
          if (reach[j]) {
            at(i, j, p.lhs) = 1;
            changed = true;
          }
        }
      }
    }
  }
  return at(0, n, g.start()) != 0;
}

std::optional<std::size_t> led_enum_oracle(const Grammar& g, const TerminalString& s, std::size_t radius_cap) {
  std::set<TerminalId> alpha;
  for (TerminalId t = 0; t < g.num_terminals(); ++t) alpha.insert(t);
  alpha.insert(s.begin(), s.end());

  std::unordered_map<TerminalString, bool, StringHash> memo;
  auto member = [&](const TerminalString& w) {
    auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    bool r = member_naive(g, w);
    memo.emplace(w, r);
    return r;
  };

  std::unordered_set<TerminalString, StringHash> seen{s};
  std::vector<TerminalString> frontier{s};
  for (std::size_t k = 0;; ++k) {
    for (const TerminalString& w : frontier)
      if (member(w)) return k;
    if (k == radius_cap) return std::nullopt;
    std::vector<TerminalString> next;
    auto push = [&](TerminalString w) {
      if (seen.insert(w).second) next.push_back(std::move(w));
    };
    for (const TerminalString& w : frontier) {
      for (std::size_t pos = 0; pos <= w.size(); ++pos)
        for (TerminalId t : alpha) {
          TerminalString v = w;
          v.insert(v.begin() + static_cast<std::ptrdiff_t>(pos), t);
          push(std::move(v));
        }
      for (std::size_t pos = 0; pos < w.size(); ++pos) {
        TerminalString v = w;
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(pos));
        push(std::move(v));
        for (TerminalId t : alpha) {
          if (t == w[pos]) continue;
          TerminalString u = w;
          u[pos] = t;
          push(std::move(u));
        }
      }
    }
    frontier.swap(next);
  }
}

std::set<Rational> parse_probabilities(const Scfg& scfg, const TerminalString& s) {
  const Grammar& g = scfg.grammar;
  const std::size_t n = s.size();
  std::set<Rational> out;
  if (n == 0) {
    for (const Production& p : g.productions())
      if (p.lhs == g.start() && p.rhs.empty()) out.insert(*p.prob);
    return out;
  }
  const std::size_t nts = g.num_nonterminals();
  std::vector<std::set<Rational>> sets((n + 1) * (n + 1) * nts);
  auto at = [&](std::size_t i, std::size_t j, std::size_t a) -> std::set<Rational>& {
    return sets[(i * (n + 1) + j) * nts + a];
  };
  for (std::size_t i = 0; i < n; ++i)
    for (const Production& p : g.productions())
      if (p.rhs.size() == 1 && p.rhs[0].is_terminal() && p.rhs[0].id == s[i]) at(i, i + 1, p.lhs).insert(*p.prob);
  for (std::size_t len = 2; len <= n; ++len)
    for (std::size_t i = 0; i + len <= n; ++i) {
      const std::size_t j = i + len;
      for (const Production& p : g.productions()) {
        if (p.rhs.size() != 2) continue;
        for (std::size_t k = i + 1; k < j; ++k)
          for (const Rational& l : at(i, k, p.rhs[0].id))
            for (const Rational& r : at(k, j, p.rhs[1].id)) at(i, j, p.lhs).insert(*p.prob * l * r);
      }
    }
  return at(0, n, g.start());
}

Rational parse_enum_oracle(const Scfg& g, const TerminalString& s) {
  std::set<Rational> all = parse_probabilities(g, s);
  return all.empty() ? Rational(0) : *all.rbegin();
}

IntMatrix min_plus_naive(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("shape mismatch");
  IntMatrix c(a.rows(), b.cols(), std::nullopt);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      for (std::size_t k = 0; k < a.cols(); ++k) {
        if (!a(i, k) || !b(k, j)) continue;
        std::int64_t v = *a(i, k) + *b(k, j);
        if (!c(i, j) || v < *c(i, j)) c(i, j) = v;
      }
  return c;
}

RationalMatrix min_times_naive(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.rows() || a.cols() == 0) throw InvalidArgument("shape mismatch");
  RationalMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Rational best = a(i, 0) * b(0, j);
      for (std::size_t k = 1; k < a.cols(); ++k) best = std::min(best, Rational(a(i, k) * b(k, j)));
      c(i, j) = best;
    }
  return c;
}

bool triangle_naive(const IntMatrix& w) {
  const std::size_t n = w.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!w(i, j)) continue;
      for (std::size_t k = j + 1; k < n; ++k)
        if (w(j, k) && w(i, k) && *w(i, j) + *w(j, k) + *w(i, k) < 0) return true;
    }
  return false;
}

std::size_t string_edit_distance(const TerminalString& x, const TerminalString& y) {
  std::vector<std::size_t> prev(y.size() + 1), cur(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1)});
    prev.swap(cur);
  }
  return prev[y.size()];
}

std::set<TerminalString> language_upto(const Grammar& g, std::size_t max_len) {
  std::vector<std::set<TerminalString>> lang(g.num_nonterminals());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Production& p : g.productions()) {
      std::set<TerminalString> acc{TerminalString{}};
      for (const Symbol& x : p.rhs) {
        std::set<TerminalString> next;
        for (const TerminalString& u : acc) {
          if (x.is_terminal()) {
            if (u.size() < max_len) {
              TerminalString v = u;
              v.push_back(x.id);
              next.insert(std::move(v));
            }
            continue;
          }
          for (const TerminalString& w : lang[x.id]) {
            if (u.size() + w.size() > max_len) continue;
            TerminalString v = u;
            v.insert(v.end(), w.begin(), w.end());
            next.insert(std::move(v));
          }
        }
        acc.swap(next);
        if (acc.empty()) break;
      }
      for (const TerminalString& w : acc)
        if (lang[p.lhs].insert(w).second) changed = true;
    }
  }
  if (g.num_nonterminals() == 0) return {};
  return lang[g.start()];
}

}  // namespace lanedit::oracle
