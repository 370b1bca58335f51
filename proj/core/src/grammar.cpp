#include "lanedit/grammar.hpp"

#include "lanedit/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace lanedit {

NonterminalId Grammar::intern_nonterminal(std::string_view name) {
  std::string key(name);
  if (auto it = nonterminal_index_.find(key); it != nonterminal_index_.end()) return it->second;
  auto id = static_cast<NonterminalId>(nonterminal_names_.size());
  nonterminal_names_.push_back(key);
  nonterminal_index_.emplace(std::move(key), id);
  return id;
}

TerminalId Grammar::intern_terminal(std::string_view name) {
  std::string key(name);
  if (auto it = terminal_index_.find(key); it != terminal_index_.end()) return it->second;
  auto id = static_cast<TerminalId>(terminal_names_.size());
  terminal_names_.push_back(key);
  terminal_index_.emplace(std::move(key), id);
  return id;
}

NonterminalId Grammar::fresh_nonterminal(std::string_view hint) {
  std::string base(hint);
  if (!nonterminal_index_.count(base)) return intern_nonterminal(base);
  for (std::size_t k = 1;; ++k) {
    std::string name = base + "_" + std::to_string(k);
    if (!nonterminal_index_.count(name)) return intern_nonterminal(name);
  }
}

std::optional<NonterminalId> Grammar::find_nonterminal(std::string_view name) const {
  if (auto it = nonterminal_index_.find(std::string(name)); it != nonterminal_index_.end())
    return it->second;
  return std::nullopt;
}

std::optional<TerminalId> Grammar::find_terminal(std::string_view name) const {
  if (auto it = terminal_index_.find(std::string(name)); it != terminal_index_.end())
    return it->second;
  return std::nullopt;
}

void Grammar::add_production(Production p) {
  if (p.lhs >= num_nonterminals()) throw GrammarError("production with unknown left-hand side");
  for (const Symbol& s : p.rhs) {
    if (s.is_terminal() && s.id >= num_terminals())
      throw GrammarError("production with unknown terminal");
    if (s.is_nonterminal() && s.id >= num_nonterminals())
      throw GrammarError("production with unknown nonterminal");
  }
  productions_.push_back(std::move(p));
}

bool Grammar::is_stochastic() const {
  if (productions_.empty()) return false;
  return std::all_of(productions_.begin(), productions_.end(),
                     [](const Production& p) { return p.prob.has_value(); });
}

bool Grammar::has_start_epsilon() const {
  return std::any_of(productions_.begin(), productions_.end(), [&](const Production& p) {
    return p.lhs == start_ && p.is_epsilon();
  });
}

bool Grammar::is_cnf() const {
  bool start_eps = has_start_epsilon();
  for (const Production& p : productions_) {
    if (p.is_binary() || p.is_terminal_rule()) {
      if (start_eps && p.is_binary() &&
          (p.rhs[0].id == start_ || p.rhs[1].id == start_))
        return false;
      continue;
    }
    if (p.is_epsilon() && p.lhs == start_) continue;
    return false;
  }
  return true;
}

std::string Grammar::to_text() const {
  std::ostringstream out;
  auto emit = [&](const Production& p) {
    out << nonterminal_names_[p.lhs] << " ->";
    if (p.rhs.empty()) out << " EPS";
    for (const Symbol& s : p.rhs)
      out << ' ' << (s.is_terminal() ? terminal_names_[s.id] : nonterminal_names_[s.id]);
    if (p.prob) out << " [" << to_string(*p.prob) << ']';
    out << '\n';
  };
  // the first rule printed fixes the start symbol on re-parse
  for (const Production& p : productions_)
    if (p.lhs == start_) emit(p);
  for (const Production& p : productions_)
    if (p.lhs != start_) emit(p);
  return out.str();
}

bool cyk_recognize(const Grammar& cnf, const TerminalString& s) {
  if (!cnf.is_cnf()) throw GrammarError("cyk_recognize needs a CNF grammar");
  for (TerminalId t : s)
    if (t >= cnf.num_terminals())
      throw UnknownSymbolError("symbol id " + std::to_string(t) + " is not a terminal of the grammar");
  const std::size_t n = s.size();
  if (n == 0) return cnf.has_start_epsilon();
  const std::size_t nn = cnf.num_nonterminals();
  // table[(i * (n + 1) + j) * nn + A]
  std::vector<char> table((n + 1) * (n + 1) * nn, 0);
  auto at = [&](std::size_t i, std::size_t j, NonterminalId a) -> char& {
    return table[(i * (n + 1) + j) * nn + a];
  };
  for (std::size_t i = 0; i < n; ++i)
    for (const Production& p : cnf.productions())
      if (p.is_terminal_rule() && p.rhs[0].id == s[i]) at(i, i + 1, p.lhs) = 1;
  for (std::size_t len = 2; len <= n; ++len)
    for (std::size_t i = 0; i + len <= n; ++i) {
      std::size_t j = i + len;
      for (std::size_t k = i + 1; k < j; ++k)
        for (const Production& p : cnf.productions())
          if (p.is_binary() && at(i, k, p.rhs[0].id) && at(k, j, p.rhs[1].id)) at(i, j, p.lhs) = 1;
    }
  return at(0, n, cnf.start());
}

std::vector<std::string> tokenize_symbols(const Grammar& g, std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  if (out.size() == 1 && !g.find_terminal(out[0])) {
    std::string word = out[0];
    out.clear();
    for (char c : word) out.emplace_back(1, c);
  }
  return out;
}

TerminalString encode_string(Grammar& g, std::string_view text) {
  TerminalString s;
  for (const std::string& tok : tokenize_symbols(g, text)) s.push_back(g.intern_terminal(tok));
  return s;
}

TerminalString encode_string_strict(const Grammar& g, std::string_view text) {
  TerminalString s;
  for (const std::string& tok : tokenize_symbols(g, text)) {
    auto id = g.find_terminal(tok);
    if (!id) throw UnknownSymbolError("symbol '" + tok + "' is not a terminal of the grammar");
    s.push_back(*id);
  }
  return s;
}

std::string decode_string(const Grammar& g, const TerminalString& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += s[i] < g.num_terminals() ? g.terminal_name(s[i]) : "#" + std::to_string(s[i]);
  }
  return out;
}

std::optional<std::size_t> shortest_length(const Grammar& g) {
  constexpr std::size_t kInf = static_cast<std::size_t>(-1);
  std::vector<std::size_t> len(g.num_nonterminals(), kInf);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Production& p : g.productions()) {
      std::size_t total = 0;
      bool ok = true;
      for (const Symbol& s : p.rhs) {
        if (s.is_terminal()) {
          ++total;
        } else if (len[s.id] == kInf) {
          ok = false;
          break;
        } else {
          total += len[s.id];
        }
      }
      if (ok && total < len[p.lhs]) {
        len[p.lhs] = total;
        changed = true;
      }
    }
  }
  if (g.num_nonterminals() == 0 || len[g.start()] == kInf) return std::nullopt;
  return len[g.start()];
}

}  // namespace lanedit
