#pragma once

#include "lanedit/augment.hpp"
#include "lanedit/matrix_io.hpp"
#include "lanedit/scorekit.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace lanedit {

struct Backpointer {
  enum class Kind : std::uint8_t {
    none,      // input entry without derivation information
    leaf,      // terminal rule at position `split`
    binary,    // C -> A B with A over (i, split) and B over (split, j)
    dn_left,   // C -> D X, D derives epsilon, X in the same cell
    dn_right,  // C -> X D, D derives epsilon, X in the same cell
  };
  Kind kind = Kind::none;
  ProductionIndex production = 0;
  std::uint32_t split = 0;
  double left_score = 0;
  double right_score = 0;

  bool operator==(const Backpointer&) const = default;
};

struct TupleEntry {
  NonterminalId nt = 0;
  double score = 0;
  Backpointer back;

  bool operator==(const TupleEntry&) const = default;
};

/// Entry `cand` beats `cur` on (score, production, split).
bool better_entry(const TupleEntry& cand, const TupleEntry& cur);

/// At most one entry per nonterminal, sorted by nonterminal id.
class TupleCell {
 public:
  using const_iterator = std::vector<TupleEntry>::const_iterator;

  const TupleEntry* find(NonterminalId a) const;
  TupleEntry* find(NonterminalId a);
  /// Min-union of one entry. Returns true when the cell changed.
  bool offer(const TupleEntry& e);
  void merge(const TupleCell& other);
  void erase_above(double cap);
  void clear() { entries_.clear(); }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }
  std::vector<TupleEntry>& raw() { return entries_; }

  /// Same nonterminals with the same scores (backpointers ignored).
  bool same_scores(const TupleCell& other) const;
  bool operator==(const TupleCell&) const = default;

 private:
  std::vector<TupleEntry> entries_;
};

class TupleMatrix {
 public:
  TupleMatrix() = default;
  TupleMatrix(std::size_t rows, std::size_t cols, double cap)
      : rows_(rows), cols_(cols), cap_(cap), cells_(rows * cols) {}
  TupleMatrix(std::size_t dim, double cap) : TupleMatrix(dim, dim, cap) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t dim() const { return rows_; }
  double cap() const { return cap_; }
  void set_cap(double cap) { cap_ = cap; }

  TupleCell& cell(std::size_t i, std::size_t j) { return cells_[i * cols_ + j]; }
  const TupleCell& cell(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }
  const TupleCell& operator()(std::size_t i, std::size_t j) const { return cell(i, j); }

  /// Copy of rows [r0, r1) x cols [c0, c1).
  TupleMatrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const;

  bool same_scores(const TupleMatrix& other) const;
  bool operator==(const TupleMatrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  double cap_ = 0;
  std::vector<TupleCell> cells_;
};

/// b(i, i+1) = {(A, score(A -> s_i))}, all other cells empty. dim = |s| + 1.
TupleMatrix string_matrix(const TerminalString& s, const ScoredGrammar& ge, double cap);

/// (C, u + v + score(C -> A B)) for every C -> A B with total <= cap.
std::vector<std::pair<NonterminalId, double>> op_r(std::pair<NonterminalId, double> a,
                                                   std::pair<NonterminalId, double> b,
                                                   const ScoredGrammar& ge, double cap);

/// Min-union over all pairs of op_r. `split` is recorded in the backpointers.
TupleCell elem_mult(const TupleCell& t1, const TupleCell& t2, const ScoredGrammar& ge, double cap,
                    std::uint32_t split = 0);

enum class Backend { naive, boolean, bigint };
const char* to_string(Backend b);

struct ProductOptions {
  Backend backend = Backend::naive;
  /// Pass distinct scores through a SidonMap in the boolean and bigint backends.
  bool use_sidon = false;
  /// Largest expanded row/column count accepted by the boolean and bigint backends.
  std::size_t max_expanded_dim = 1u << 14;
  /// Largest encoded integer, in bits, accepted by the bigint backend.
  std::size_t bigint_bit_budget = 1'000'000;
  /// Global coordinates of the operand blocks (splits and hook arguments use them).
  std::size_t row_offset = 0, mid_offset = 0, col_offset = 0;
  /// Score of C from a minimal pair sum for production p at global (row, col).
  /// Default: pair_sum + score(p).
  std::function<double(std::size_t row, std::size_t col, ProductionIndex p, double pair_sum)> combine;
};

/// c(i,j) = min-union over k of elem_mult(a(i,k), b(k,j)). All backends give identical
/// cells, backpointers included.
TupleMatrix matrix_mult(const TupleMatrix& a, const TupleMatrix& b, const ScoredGrammar& ge, double cap,
                        const ProductOptions& opts = {});

/// Min-union over k in the given ranges of elem_mult(m(i,k), m(k,j)) on one square
/// matrix, with the same per-production semantics as matrix_mult. Offsets in `opts`
/// are ignored; i, j and k are already global.
TupleCell cell_product(const TupleMatrix& m, std::size_t i, std::size_t j,
                       const std::vector<std::pair<std::size_t, std::size_t>>& k_ranges, const ScoredGrammar& ge,
                       double cap, const ProductOptions& opts = {});

struct DistanceProduct {
  IntMatrix min_sum;
  /// Distinct finite sums a(i,k) + b(k,j) per entry, ascending.
  Matrix<std::vector<std::int64_t>> all_sums;
};

/// (min,+) product through big-integer encoding x -> base^(V - x), base = inner dim + 1.
DistanceProduct distance_product_bigint(const IntMatrix& a, const IntMatrix& b, std::int64_t value_bound,
                                        std::size_t bit_budget = 1'000'000,
                                        std::size_t max_dim = 1u << 14);

/// Boolean-expansion backend with an explicit distinct value list v_0 < ... < v_R.
TupleMatrix tuple_product_boolean(const TupleMatrix& a, const TupleMatrix& b, const ScoredGrammar& ge,
                                  const std::vector<double>& values, double cap,
                                  const ProductOptions& opts = {});

/// Replays backpointers into a derivation tree.
struct DerivationNode {
  NonterminalId nt = 0;
  std::optional<ProductionIndex> production;
  std::size_t begin = 0, end = 0;  // span of the input; equal for epsilon subtrees
  int left = -1, right = -1;       // child node indices
};

struct Derivation {
  std::vector<DerivationNode> nodes;  // nodes[0] is the root
  double score = 0;                   // sum of rule scores over all nodes
  std::size_t cells_touched = 0;      // distinct matrix cells read during replay
};

/// Derivation of `nt` over span (i, j) of a closed matrix. Epsilon parts are expanded
/// from `deletions`. Throws InvalidArgument if the entry is absent or lacks backpointers.
Derivation replay(const TupleMatrix& m, const ScoredGrammar& ge, const DeletionSet* deletions, std::size_t i,
                  std::size_t j, NonterminalId nt);

/// Total of rule scores of a derivation, recomputed from the grammar.
double derivation_score(const Derivation& d, const ScoredGrammar& ge);

}  // namespace lanedit
