#pragma once

#include "lanedit/augment.hpp"
#include "lanedit/scorekit.hpp"
#include "lanedit/tuplemat.hpp"

#include <cstdint>
#include <optional>

namespace lanedit {

enum class ClosureAlgorithm { naive, valiant };

struct RoundingConfig {
  enum class Style {
    led,   // round each product result and each saturation pass
    scfg,  // additionally round the pair sum, the rule score and their sum inside products
  };
  LevelGrid grid;
  std::uint64_t seed = 0;
  Style style = Style::led;
};

struct ClosureConfig {
  double cap = kInfinity;
  std::size_t base_block = 4;
  ClosureAlgorithm algorithm = ClosureAlgorithm::valiant;
  /// Backend and Sidon switch for block products; offsets and hooks are set internally.
  ProductOptions product;
  const DeletionSet* dn = nullptr;
  /// 0 means |G_e| passes.
  std::size_t max_saturation_passes = 0;
  std::optional<RoundingConfig> rounding;
};

/// entry <- entry ∪ D_n·entry ∪ entry·D_n until fixpoint or the pass limit; drops
/// scores above cap. Returns the number of passes that changed the cell.
std::size_t dn_saturate(TupleCell& cell, const ScoredGrammar& ge, const DeletionSet& dn, double cap,
                        std::size_t max_passes = 0);
void dn_saturate(TupleMatrix& m, const ScoredGrammar& ge, const DeletionSet& dn, double cap,
                 std::size_t max_passes = 0);

/// Span-increasing DP; each cell is finished with the D_n pass.
TupleMatrix closure_naive(const TupleMatrix& b, const ScoredGrammar& ge, const ClosureConfig& cfg);
/// Divide and conquer over overlapping diagonal blocks; equal to closure_naive.
TupleMatrix closure_valiant(const TupleMatrix& b, const ScoredGrammar& ge, const ClosureConfig& cfg);
/// Dispatches on cfg.algorithm.
TupleMatrix closure(const TupleMatrix& b, const ScoredGrammar& ge, const ClosureConfig& cfg);

/// Closure of an exact initial matrix with randomized rounding after every product and
/// every saturation pass. Input scores are rounded first. Requires cfg.rounding.
TupleMatrix closure_plus_plus(const TupleMatrix& m0, const ScoredGrammar& ge, const ClosureConfig& cfg);

}  // namespace lanedit
