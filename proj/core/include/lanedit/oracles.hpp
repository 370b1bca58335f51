#pragma once

// Brute-force references for tests. Nothing here calls into the engines: membership,
// enumeration and the matrix products are all written out directly.

#include "lanedit/grammar.hpp"
#include "lanedit/matrix_io.hpp"
#include "lanedit/rational.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace lanedit::oracle {

/// Membership for any grammar (epsilon and unit rules allowed) by a span fixpoint.
bool member_naive(const Grammar& g, const TerminalString& s);

/// First radius k ≤ radius_cap whose edit ball around s holds a member of L(g), over
/// the terminals of g and of s. nullopt means the distance exceeds radius_cap.
std::optional<std::size_t> led_enum_oracle(const Grammar& g, const TerminalString& s, std::size_t radius_cap);

/// Largest product of rule probabilities over all parse trees of s (0 when s ∉ L).
/// g must be in CNF.
Rational parse_enum_oracle(const Scfg& g, const TerminalString& s);

/// Every tree probability of s, for tests that look at ties.
std::set<Rational> parse_probabilities(const Scfg& g, const TerminalString& s);

IntMatrix min_plus_naive(const IntMatrix& a, const IntMatrix& b);
RationalMatrix min_times_naive(const RationalMatrix& a, const RationalMatrix& b);

/// Some i < j < k with all three edges present and w_ij + w_jk + w_ik < 0.
bool triangle_naive(const IntMatrix& w);

/// Unit-cost Levenshtein distance.
std::size_t string_edit_distance(const TerminalString& x, const TerminalString& y);

/// All members of L(g) of length ≤ max_len.
std::set<TerminalString> language_upto(const Grammar& g, std::size_t max_len);

}  // namespace lanedit::oracle
