#pragma once

#include "lanedit/augment.hpp"
#include "lanedit/grammar.hpp"
#include "lanedit/matrix_io.hpp"
#include "lanedit/rational.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lanedit {

/// Matrix index i in [1, m] split into a block part in [1, d²] and an offset in
/// [2, d+1]. The split is taken on i−1 so that both ranges hold for every i ≤ d³.
struct IndexSplit {
  std::size_t hi = 0;
  std::size_t lo = 0;
  bool operator==(const IndexSplit&) const = default;
};

/// ⌈m^{1/3}⌉, computed exactly.
std::size_t reduction_block(std::size_t m);
IndexSplit split_index(std::size_t i, std::size_t d);
std::size_t join_index(IndexSplit s, std::size_t d);

/// A nonterminal and a span of the instance string, 0-based and half-open.
struct SpanQuery {
  NonterminalId nt = 0;
  std::size_t begin = 0, end = 0;
};

/// Which (nonterminal, span) pairs occur in some derivation of the whole string,
/// i.e. S ⇒* s_1..s_{begin} A s_{end+1}..s_n.
class ConsistencyTable {
 public:
  ConsistencyTable() = default;
  ConsistencyTable(const Grammar& cnf, const TerminalString& s);

  bool consistent(NonterminalId a, std::size_t begin, std::size_t end) const;

 private:
  std::size_t n_ = 0, nts_ = 0;
  std::vector<char> outside_;
};

struct LedQuery : SpanQuery {
  std::int64_t offset = 0;  // (2M+1)(2δ+j₂−i₂), subtracted from the oracle answer
};

struct LedReductionInstance {
  Grammar grammar;  // not in CNF
  TerminalString s;
  std::size_t m = 0, d = 0, delta = 0;
  std::int64_t max_entry = 0;  // M
  std::size_t blocks = 0;      // number of block indices in use, ⌊(m−1)/d⌋+1
  std::vector<NonterminalId> c_ids;  // C_{p,q} at (p−1)·blocks + (q−1)

  NonterminalId c_nonterminal(std::size_t p, std::size_t q) const;
  /// Query answering c(i, j) for 1-based matrix indices.
  LedQuery query(std::size_t i, std::size_t j) const;
};

/// Grammar and string whose insertion-only distances encode the (min,+) product of a
/// and b. Entries must be non-negative; nullopt entries emit no rule, and product entries
/// without a finite witness come back as nullopt.
LedReductionInstance build_led_instance(const IntMatrix& a, const IntMatrix& b);

/// Answers for a batch of queries; nullopt is +infinity.
using LedOracle = std::function<std::vector<std::optional<double>>(const LedReductionInstance&,
                                                                    const std::vector<SpanQuery>&)>;

/// Minimum number of insertions into the span for the queried nonterminal to derive it,
/// for spans that are consistent. Every terminal a rule produces may instead be charged
/// one insertion; input symbols can never be dropped.
std::vector<std::optional<double>> insertion_only_led(const LedReductionInstance& inst,
                                                      const std::vector<SpanQuery>& queries);

/// Scored grammar used by insertion_only_led: CNF rules at 0 plus A -> EPS at 1 for every
/// A with a terminal rule.
ScoredGrammar insertion_only_grammar(const Grammar& cnf);

IntMatrix distance_product_via_led(const IntMatrix& a, const IntMatrix& b, const LedOracle& oracle = insertion_only_led);

enum class EditKind : std::uint8_t { insertion, deletion, substitution };

struct EditCost {
  TerminalId symbol = 0;
  EditKind kind = EditKind::insertion;
  double cost = 0;
};

struct WeightedScoring {
  std::vector<EditCost> costs;  // one per (terminal, kind)
  double cost(TerminalId t, EditKind k) const;
};

/// Insertions cost 1; deletions and substitutions cost (3d+6)(M+1).
WeightedScoring build_weighted_led_scoring(const LedReductionInstance& inst);

/// Error grammar with per-symbol costs: A -> EPS costs the insertion of A's symbol,
/// I -> x the deletion of x and A -> y the substitution of A's symbol.
ScoredGrammar weighted_error_grammar(const Grammar& cnf, const std::vector<TerminalId>& sigma,
                                     const WeightedScoring& scoring);

/// Weighted distances of the queried spans under `scoring`, consistent spans only.
std::vector<std::optional<double>> weighted_led(const LedReductionInstance& inst, const WeightedScoring& scoring,
                                                const std::vector<SpanQuery>& queries);

struct ScfgQuery : SpanQuery {
  std::size_t exponent = 0;  // number of W steps in the optimal parse, j₂+2δ−i₂−3
};

struct ScfgReductionInstance {
  Grammar grammar;  // stochastic, not in CNF
  TerminalString s;
  std::size_t m = 0, d = 0, delta = 0;
  std::size_t blocks = 0;  // d²: every block index gets its nonterminals
  Rational max_count_a, max_count_b;
  std::vector<Rational> count_a, count_b;  // per (p, q), row-major over blocks
  std::vector<NonterminalId> a_ids, b_ids, c_ids;

  NonterminalId c_nonterminal(std::size_t p, std::size_t q) const;
  ScfgQuery query(std::size_t i, std::size_t j) const;
  /// 2(3d+6): the inverse probability of one W rule.
  std::int64_t w_inverse() const { return 2 * (3 * static_cast<std::int64_t>(d) + 6); }
};

/// SCFG whose maximum parse probabilities encode the (min,×) product of a and b.
/// Entries must be positive.
ScfgReductionInstance build_scfg_instance(const RationalMatrix& a, const RationalMatrix& b);

using ScfgOracle = std::function<std::vector<Rational>(const ScfgReductionInstance&, const std::vector<SpanQuery>&)>;

/// Exact maximum probability per consistent query (0 when none).
std::vector<Rational> stochastic_parse_oracle(const ScfgReductionInstance& inst, const std::vector<SpanQuery>& queries);

using RationalEntryMatrix = Matrix<std::optional<Rational>>;

/// Exact (min,×) product from the oracle; nullopt where the oracle returns 0.
RationalEntryMatrix min_times_via_scfg(const RationalMatrix& a, const RationalMatrix& b,
                                       const ScfgOracle& oracle = stochastic_parse_oracle);

/// Same product decoded in the log domain from the Viterbi chart scores.
Matrix<double> min_times_via_scfg_log(const RationalMatrix& a, const RationalMatrix& b);

using MinTimesProduct = std::function<RationalMatrix(const RationalMatrix&, const RationalMatrix&)>;

struct TriangleReport {
  bool found = false;
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // 0-based edge with c' ≤ 0
  std::optional<BigInt> min_shifted;  // min c' over present edges
};

/// Negative triangle detection through one (min,×) product. w is symmetric; nullopt
/// marks a missing edge, the diagonal is ignored. Weights must lie in [−bound, bound]
/// with bound ≥ 3.
TriangleReport negative_triangle_via_min_times(const IntMatrix& w, std::int64_t bound, const MinTimesProduct& product);

}  // namespace lanedit
