#pragma once

#include "lanedit/grammar.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace lanedit {

using ProductionIndex = std::uint32_t;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RuleKind : std::uint8_t {
  original,
  elem_subst,
  elem_insert,
  elem_delete,
  insert_glue,
  subst_header,
};

const char* to_string(RuleKind k);

struct ScoredProduction {
  Production production;
  double score = 0;
  RuleKind kind = RuleKind::original;
  // For elem_subst / elem_delete: the grammar terminal the edit produces.
  std::optional<TerminalId> edit_symbol;
};

/// A CNF grammar whose rules carry non-negative scores, with lookup indices for the
/// tuple algebra. Nonterminal ids of the base grammar are kept; extra ones are appended.
class ScoredGrammar {
 public:
  ScoredGrammar() = default;
  explicit ScoredGrammar(Grammar base);

  NonterminalId add_nonterminal(std::string name);
  /// Adds a rule; duplicates of an existing (lhs, rhs) keep the lower score.
  void add(ScoredProduction p);
  /// Sets the number of terminal ids the grammar must accept (ids beyond the base table
  /// stand for symbols outside the grammar alphabet).
  void set_terminal_count(std::size_t n);

  const Grammar& base() const { return base_; }
  NonterminalId start() const { return base_.start(); }
  std::optional<NonterminalId> insert_nonterminal() const { return insert_nonterminal_; }
  void set_insert_nonterminal(NonterminalId id) { insert_nonterminal_ = id; }

  std::size_t num_nonterminals() const { return names_.size(); }
  std::size_t num_terminals() const { return terminal_count_; }
  const std::string& nonterminal_name(NonterminalId id) const { return names_.at(id); }

  const std::vector<ScoredProduction>& productions() const { return productions_; }
  std::size_t size() const { return productions_.size(); }
  const ScoredProduction& operator[](ProductionIndex i) const { return productions_[i]; }

  /// Binary rules C -> A B with left child A, in production-index order.
  const std::vector<ProductionIndex>& binary_by_left(NonterminalId a) const { return by_left_[a]; }
  const std::vector<ProductionIndex>& binary_by_right(NonterminalId b) const { return by_right_[b]; }
  const std::vector<ProductionIndex>& binary_rules() const { return binary_; }
  /// Rules A -> t. Empty for terminals no rule mentions.
  const std::vector<ProductionIndex>& terminal_rules(TerminalId t) const;
  const std::vector<ProductionIndex>& epsilon_rules() const { return epsilon_; }

  std::string to_text() const;

 private:
  Grammar base_;
  std::vector<std::string> names_;
  std::vector<ScoredProduction> productions_;
  std::optional<NonterminalId> insert_nonterminal_;
  std::size_t terminal_count_ = 0;
  std::vector<std::vector<ProductionIndex>> by_left_, by_right_, by_terminal_;
  std::vector<ProductionIndex> binary_, epsilon_;
};

/// Scored grammar holding just the rules of a CNF grammar at score 0 (or -log2 p for
/// stochastic grammars when `use_probabilities`).
ScoredGrammar scored_from_cnf(const Grammar& cnf, bool use_probabilities = false);

/// Terminals of g plus those of s (ids are already interned in g's table or beyond it).
std::vector<TerminalId> working_alphabet(const Grammar& g, const TerminalString& s);

/// Error grammar: originals at score 0, elementary substitution/insertion/deletion
/// rules at score 1 and glue rules at score 0.
ScoredGrammar build_error_grammar(const Grammar& cnf, const std::vector<TerminalId>& sigma);

struct DeletionEntry {
  double score = kInfinity;
  // epsilon rule, or binary rule whose children are read from the same set
  std::optional<ProductionIndex> production;
};

struct DeletionSet {
  std::size_t index = 0;
  std::vector<DeletionEntry> entries;  // indexed by nonterminal id

  bool contains(NonterminalId a) const { return a < entries.size() && entries[a].production.has_value(); }
  double score(NonterminalId a) const { return contains(a) ? entries[a].score : kInfinity; }
  std::size_t count() const;
  bool same_scores(const DeletionSet& other) const;
};

/// D_1..D_n. Stops computing at the first fixpoint and repeats that set for the rest.
/// Scores above the index are kept: a set certifies derivations, it does not cap them.
std::vector<DeletionSet> deletion_sets(const ScoredGrammar& ge, std::size_t n);

/// Just D_n (the fixpoint when it is reached before n).
DeletionSet deletion_set_final(const ScoredGrammar& ge, std::size_t n);

}  // namespace lanedit
