#pragma once

#include "lanedit/augment.hpp"
#include "lanedit/closure.hpp"
#include "lanedit/grammar.hpp"
#include "lanedit/tuplemat.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace lanedit {

struct EditOp {
  enum class Kind : std::uint8_t { insert, erase, substitute };
  Kind kind = Kind::insert;
  std::size_t position = 0;  // index into the string as edited so far
  TerminalId symbol = 0;     // inserted/substituted symbol, or the erased one

  bool operator==(const EditOp&) const = default;
};

const char* to_string(EditOp::Kind k);

struct EditScript {
  std::vector<EditOp> ops;
  double cost = 0;

  bool operator==(const EditScript&) const = default;
};

/// Applies ops in order. Throws InvalidArgument for out-of-range positions.
TerminalString apply_script(const TerminalString& s, const EditScript& script);

/// Everything the LED engines share for one (grammar, string) pair.
struct LedContext {
  Grammar cnf;
  TerminalString s;
  ScoredGrammar ge;
  DeletionSet dn;
  std::size_t shortest = 0;  // length of a shortest member of L(G)

  /// max(j − i, shortest): S derives s_i..s_{j-1} within this many edits.
  std::size_t trivial_bound(std::size_t i, std::size_t j) const;
};

/// Builds the error grammar over the grammar's terminals plus those of s. Terminal ids
/// of s beyond the grammar's table are accepted as symbols outside L's alphabet.
/// Throws EmptyLanguageError when L(g) is empty.
LedContext make_led_context(const Grammar& g, const TerminalString& s);

struct LedOptions {
  ClosureAlgorithm algorithm = ClosureAlgorithm::valiant;
  Backend backend = Backend::naive;
  bool use_sidon = false;
  std::size_t base_block = 4;
};

struct ExactLed {
  LedContext ctx;
  TupleMatrix closure;  // exact scores for every substring
  std::size_t distance = 0;

  /// Exact distance of s_i..s_{j-1} (0-based, i ≤ j).
  std::size_t substring_distance(std::size_t i, std::size_t j) const;
};

ExactLed led_exact_full(const Grammar& g, const TerminalString& s, const LedOptions& opts = {});

struct LedResult {
  std::size_t distance = 0;
  EditScript script;
};

LedResult led_exact(const Grammar& g, const TerminalString& s, const LedOptions& opts = {});

struct ApproxOptions : LedOptions {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// Cap of the exact initial closure.
  double exact_cap = 10;
  /// Override for the number of runs (0: ⌈6 log2 n⌉, at least 1).
  std::size_t runs = 0;
  /// Grid top as a multiple of the trivial bound max(n, shortest).
  double grid_headroom = 2.0;
};

struct LocalEstimates {
  std::size_t n = 0;
  double eps = 0, delta = 0;
  std::size_t eta = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> run_seeds;
  /// estimate(i, j) for 0 ≤ i < j ≤ n, row-major over (n+1) x (n+1).
  std::vector<double> values;
  /// Cells whose value comes from the exact initial closure.
  std::vector<char> exact;
  std::size_t median_run = 0;
  EditScript script;  // for the full string

  double at(std::size_t i, std::size_t j) const { return values[i * (n + 1) + j]; }
  bool is_exact(std::size_t i, std::size_t j) const { return exact[i * (n + 1) + j] != 0; }
  double full() const { return at(0, n); }
};

/// (1+ε)-approximate distances for every substring by median of rounded closures.
LocalEstimates led_approx(const Grammar& g, const TerminalString& s, double eps, const ApproxOptions& opts = {});

/// Seed of run r derived from the user seed.
std::uint64_t derive_run_seed(std::uint64_t seed, std::size_t run);

/// ⌈6 log2 n⌉, at least 1.
std::size_t median_runs(std::size_t n);

/// Script read off the derivation of S over (i, j) in a closed matrix.
EditScript retrieve_script(const LedContext& ctx, const TupleMatrix& m, std::size_t i, std::size_t j);
/// Script from a replayed derivation; cells_touched and cost are carried over.
EditScript script_from_derivation(const LedContext& ctx, const Derivation& d, std::size_t begin);

struct ScriptRetrieval {
  EditScript script;
  std::size_t cells_touched = 0;
};
ScriptRetrieval retrieve_script_counted(const LedContext& ctx, const TupleMatrix& m, std::size_t i, std::size_t j);

}  // namespace lanedit
