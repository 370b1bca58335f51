#pragma once

#include "lanedit/rational.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lanedit {

using NonterminalId = std::uint32_t;
using TerminalId = std::uint32_t;
using TerminalString = std::vector<TerminalId>;

struct Symbol {
  enum class Kind : std::uint8_t { terminal, nonterminal };

  Kind kind = Kind::terminal;
  std::uint32_t id = 0;

  static Symbol t(TerminalId id) { return {Kind::terminal, id}; }
  static Symbol nt(NonterminalId id) { return {Kind::nonterminal, id}; }
  bool is_terminal() const { return kind == Kind::terminal; }
  bool is_nonterminal() const { return kind == Kind::nonterminal; }

  auto operator<=>(const Symbol&) const = default;
};

struct Production {
  NonterminalId lhs = 0;
  std::vector<Symbol> rhs;
  std::optional<Rational> prob;

  bool is_epsilon() const { return rhs.empty(); }
  bool is_terminal_rule() const { return rhs.size() == 1 && rhs[0].is_terminal(); }
  bool is_unit() const { return rhs.size() == 1 && rhs[0].is_nonterminal(); }
  bool is_binary() const {
    return rhs.size() == 2 && rhs[0].is_nonterminal() && rhs[1].is_nonterminal();
  }
};

class Grammar {
 public:
  Grammar() = default;

  NonterminalId intern_nonterminal(std::string_view name);
  TerminalId intern_terminal(std::string_view name);
  /// Adds a nonterminal whose name is derived from `hint` and unused so far.
  NonterminalId fresh_nonterminal(std::string_view hint);

  std::optional<NonterminalId> find_nonterminal(std::string_view name) const;
  std::optional<TerminalId> find_terminal(std::string_view name) const;

  void add_production(Production p);
  void set_start(NonterminalId s) { start_ = s; }

  NonterminalId start() const { return start_; }
  const std::vector<Production>& productions() const { return productions_; }
  std::vector<Production>& mutable_productions() { return productions_; }
  std::size_t num_nonterminals() const { return nonterminal_names_.size(); }
  std::size_t num_terminals() const { return terminal_names_.size(); }
  const std::string& nonterminal_name(NonterminalId id) const { return nonterminal_names_.at(id); }
  const std::string& terminal_name(TerminalId id) const { return terminal_names_.at(id); }
  const std::vector<std::string>& terminal_names() const { return terminal_names_; }

  /// True when every production carries a probability.
  bool is_stochastic() const;
  /// Binary rules over nonterminals, terminal rules, and start -> EPS only when the
  /// start symbol never occurs on a right-hand side.
  bool is_cnf() const;
  bool has_start_epsilon() const;

  /// Renders the grammar in the text format accepted by parse_grammar_text.
  std::string to_text() const;

 private:
  std::vector<std::string> nonterminal_names_;
  std::vector<std::string> terminal_names_;
  std::unordered_map<std::string, NonterminalId> nonterminal_index_;
  std::unordered_map<std::string, TerminalId> terminal_index_;
  std::vector<Production> productions_;
  NonterminalId start_ = 0;
};

/// A CNF grammar whose productions all carry probabilities.
struct Scfg {
  Grammar grammar;
};

/// Checks that each nonterminal's probabilities are positive and sum to exactly 1.
/// Throws DistributionError naming the first offending nonterminal and its sum.
void validate_scfg(const Grammar& g);
inline void validate_scfg(const Scfg& g) { validate_scfg(g.grammar); }

/// Validates probabilities, converts to CNF if needed and wraps the result.
Scfg make_scfg(const Grammar& g);

/// Parses the line-based grammar format. Throws GrammarError with the offending line.
Grammar parse_grammar_text(std::string_view text);
Grammar load_grammar_file(const std::string& path);

/// Drops productions that are unproductive or unreachable from the start symbol.
/// Production order is otherwise preserved.
Grammar prune_unreachable(const Grammar& g);

/// Equivalent CNF grammar. Original nonterminal ids keep their meaning; new ones are
/// appended. Stochastic grammars may only need terminal lifting and binarization
/// (fresh rules get probability 1); epsilon or unit rules in them raise GrammarError.
Grammar to_cnf(const Grammar& g);

/// True if the CNF grammar derives s. Throws UnknownSymbolError for ids outside the
/// terminal table and GrammarError for non-CNF input.
bool cyk_recognize(const Grammar& cnf, const TerminalString& s);

/// Splits text into terminal names: whitespace-separated tokens, or one symbol per
/// character when the text has no whitespace and is not itself a terminal name.
std::vector<std::string> tokenize_symbols(const Grammar& g, std::string_view text);

/// Maps symbol names to ids, interning names the grammar does not know yet.
TerminalString encode_string(Grammar& g, std::string_view text);
/// Maps symbol names to ids; unknown names raise UnknownSymbolError.
TerminalString encode_string_strict(const Grammar& g, std::string_view text);
std::string decode_string(const Grammar& g, const TerminalString& s);

/// Length of a shortest string in L(g), or nullopt when the language is empty.
std::optional<std::size_t> shortest_length(const Grammar& g);

}  // namespace lanedit
