#pragma once

#include "lanedit/augment.hpp"
#include "lanedit/closure.hpp"
#include "lanedit/editdist.hpp"
#include "lanedit/grammar.hpp"
#include "lanedit/rational.hpp"
#include "lanedit/tuplemat.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace lanedit {

struct ParseStep {
  Production production;  // with its probability
  std::size_t begin = 0, end = 0;
};

struct ScoredParse {
  std::vector<ParseStep> steps;  // preorder
  double score = 0;              // sum of log2(1/p), recomputed from the tree
  Rational probability;          // exact product of the tree's rule probabilities
  double estimate = 0;           // reported score (equals score for the exact engine)

  double reported_probability() const;
};

/// Exact Viterbi chart: the closure of the leaf matrix with log-probability scores.
class ScfgChart {
 public:
  ScfgChart(const Scfg& g, const TerminalString& s, const LedOptions* opts = nullptr);

  const ScoredGrammar& scored() const { return ge_; }
  const TupleMatrix& matrix() const { return m_; }
  std::size_t length() const { return n_; }

  /// Best parse of `nt` over s_i..s_{j-1} (0-based, i < j), or nullopt.
  std::optional<ScoredParse> best(NonterminalId nt, std::size_t i, std::size_t j) const;

 private:
  ScoredGrammar ge_;
  TupleMatrix m_;
  std::size_t n_ = 0;
};

/// Maximum-probability parse of s, or nullopt when s is not in L(g).
std::optional<ScoredParse> viterbi_exact(const Scfg& g, const TerminalString& s);

/// Parse tree as steps, with score and probability recomputed from the rules.
ScoredParse parse_from_derivation(const ScoredGrammar& ge, const Derivation& d);

struct ScfgApproxResult {
  std::optional<ScoredParse> parse;  // tree of the median run; estimate = median score
  std::size_t n = 0;
  double eps = 0, delta = 0;
  std::size_t eta = 0;
  std::size_t median_run = 0;
  /// Median S score per substring (row-major (n+1)^2, +inf where S derives nothing).
  std::vector<double> values;
  double at(std::size_t i, std::size_t j) const { return values[i * (n + 1) + j]; }
};

/// Approximate Viterbi by median of rounded closures (no error rules).
ScfgApproxResult viterbi_approx(const Scfg& g, const TerminalString& s, double eps, const ApproxOptions& opts = {});

}  // namespace lanedit
