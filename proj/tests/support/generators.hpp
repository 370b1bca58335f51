#pragma once

#include "lanedit/grammar.hpp"
#include "lanedit/matrix_io.hpp"
#include "lanedit/rational.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace lanedit::testgen {

using Rng = std::mt19937_64;

/// Random grammar with up to `max_nts` nonterminals over terminals a, b, ... Right sides
/// have 0..3 symbols. The language is non-empty.
Grammar random_cfg(Rng& rng, std::size_t max_nts, std::size_t terminals, bool allow_epsilon = true);

/// Random CNF grammar (no epsilon) with a non-empty language.
Grammar random_cnf(Rng& rng, std::size_t nts, std::size_t terminals);

/// Random stochastic CNF grammar; each nonterminal's probabilities are k_i / K.
Grammar random_scfg(Rng& rng, std::size_t nts, std::size_t terminals);

/// Uniform string over terminal ids [0, alphabet).
TerminalString random_string(Rng& rng, std::size_t alphabet, std::size_t len);

IntMatrix random_int_matrix(Rng& rng, std::size_t m, std::int64_t lo, std::int64_t hi);
RationalMatrix random_rational_matrix(Rng& rng, std::size_t m, long long max_num, long long max_den);

/// Symmetric weight matrix; each edge present with probability `density`.
IntMatrix random_graph(Rng& rng, std::size_t n, std::int64_t bound, double density);

std::string letters(std::size_t i);

}  // namespace lanedit::testgen
