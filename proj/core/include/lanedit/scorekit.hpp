#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lanedit {

/// Geometric score levels {0} ∪ {base·(1+δ)^r : r = 0..R}, R = ⌈log_{1+δ}(max/base)⌉.
class LevelGrid {
 public:
  LevelGrid(double delta, double max_value, double base = 1.0);

  double delta() const { return delta_; }
  double max_value() const { return max_value_; }
  double base() const { return levels_[1]; }
  double top() const { return levels_.back(); }
  /// All levels including the leading 0.
  const std::vector<double>& levels() const { return levels_; }
  std::size_t exponent_count() const { return levels_.size() - 1; }

  /// Index into levels() of the largest level ≤ y (y ≥ base).
  std::size_t floor_index(double y) const;
  bool on_grid(double y) const;
  double floor_level(double y) const;
  double ceil_level(double y) const;

 private:
  double delta_;
  double max_value_;
  std::vector<double> levels_;
};

/// Uniform [0,1) value keyed by (seed, row, col, counter, slot). Pure function of its
/// arguments, so draws do not depend on evaluation order.
double keyed_uniform(std::uint64_t seed, std::uint64_t row, std::uint64_t col,
                     std::uint64_t counter, std::uint64_t slot);

/// Randomized rounding to an adjacent grid level with expectation y. Zero stays zero,
/// values in (0, base) are clamped to base first. Throws InvalidArgument outside [0, top].
double round_score(double y, const LevelGrid& grid, double uniform01);

template <class Urbg>
double round_score(double y, const LevelGrid& grid, Urbg& rng) {
  constexpr double kScale = 1.0 / 18446744073709551616.0;  // 2^-64
  static_assert(sizeof(typename Urbg::result_type) == 8, "needs a 64-bit generator");
  return round_score(y, grid, static_cast<double>(rng() >> 11) * (kScale * 2048.0));
}

/// (y − ⌊y⌋)(⌈y⌉ − y) for the grid's neighbouring levels.
double rounding_variance(double y, const LevelGrid& grid);

enum class SidonMethod { greedy, erdos_turan, automatic };

/// R strictly increasing positive integers whose pairwise sums (i ≤ j) are distinct.
/// automatic picks greedy for R ≤ 256 and Erdős–Turán above.
std::vector<std::uint64_t> sidon_sequence(std::size_t r, SidonMethod method = SidonMethod::automatic);

/// Pairs distinct scores with a Sidon sequence so that a sum of two codes identifies
/// the two scores.
class SidonMap {
 public:
  SidonMap(std::vector<double> values, SidonMethod method = SidonMethod::automatic);
  /// Map over a bare Sidon sequence (values are 1..R).
  static SidonMap from_sequence(std::vector<std::uint64_t> g);

  const std::vector<double>& values() const { return values_; }
  const std::vector<std::uint64_t>& codes() const { return g_; }
  std::size_t size() const { return g_.size(); }
  /// Position of a value in values(); throws InvalidArgument when absent.
  std::size_t index_of(double v) const;
  std::uint64_t code_of(double v) const { return g_[index_of(v)]; }

  /// Unique 1-based (i, j), i ≤ j, with g_i + g_j = sum.
  std::optional<std::pair<std::size_t, std::size_t>> decompose_sum(std::uint64_t sum) const;

 private:
  SidonMap() = default;
  void build_table();

  std::vector<double> values_;
  std::vector<std::uint64_t> g_;
  std::unordered_map<std::uint64_t, std::pair<std::size_t, std::size_t>> pairs_;
};

}  // namespace lanedit
