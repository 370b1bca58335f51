#include "lanedit/scorekit.hpp"

#include "lanedit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lanedit {

LevelGrid::LevelGrid(double delta, double max_value, double base) : delta_(delta), max_value_(max_value) {
  if (!(delta > 0) || !std::isfinite(delta)) throw InvalidArgument("grid delta must be positive");
  if (!(base > 0) || !std::isfinite(base)) throw InvalidArgument("grid base must be positive");
  if (!(max_value > 0) || !std::isfinite(max_value)) throw InvalidArgument("grid max_value must be positive");
  levels_.push_back(0.0);
  double level = base;
  levels_.push_back(level);
  // repeated multiplication keeps each level bit-identical across platforms with IEEE doubles
  while (level < max_value * (1 - 1e-12)) {
    double next = level * (1 + delta);
    if (!(next > level)) throw InvalidArgument("grid delta too small to separate levels");
    level = next;
    levels_.push_back(level);
    if (levels_.size() > 50'000'000) throw CapacityError("level grid too large");
  }
}

std::size_t LevelGrid::floor_index(double y) const {
  auto it = std::upper_bound(levels_.begin() + 1, levels_.end(), y);
  return static_cast<std::size_t>(it - levels_.begin()) - 1;
}

bool LevelGrid::on_grid(double y) const {
  return std::binary_search(levels_.begin(), levels_.end(), y);
}

double LevelGrid::floor_level(double y) const {
  if (y <= 0) return 0;
  if (y < base()) return 0;
  return levels_[floor_index(y)];
}

double LevelGrid::ceil_level(double y) const {
  if (y <= 0) return 0;
  auto it = std::lower_bound(levels_.begin() + 1, levels_.end(), y);
  if (it == levels_.end()) throw InvalidArgument("value above the grid");
  return *it;
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double keyed_uniform(std::uint64_t seed, std::uint64_t row, std::uint64_t col, std::uint64_t counter,
                     std::uint64_t slot) {
  constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t h = mix64(seed + kGolden);
  for (std::uint64_t v : {row, col, counter, slot}) h = mix64(h ^ (v + kGolden + (h << 6) + (h >> 2)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double round_score(double y, const LevelGrid& grid, double uniform01) {
  if (!(y >= 0)) throw InvalidArgument("cannot round a negative score");
  if (y == 0) return 0;
  if (y < grid.base()) y = grid.base();
  if (y > grid.top()) throw InvalidArgument("score " + std::to_string(y) + " above the level grid");
  std::size_t r = grid.floor_index(y);
  const auto& lv = grid.levels();
  if (lv[r] == y || r + 1 >= lv.size()) return lv[r];
  double width = lv[r + 1] - lv[r];
  double k = y - lv[r];
  return uniform01 < k / width ? lv[r + 1] : lv[r];
}

double rounding_variance(double y, const LevelGrid& grid) {
  if (y <= 0) return 0;
  if (y < grid.base()) y = grid.base();
  return (y - grid.floor_level(y)) * (grid.ceil_level(y) - y);
}

namespace {

std::vector<std::uint64_t> greedy_sidon(std::size_t r) {
  std::vector<std::uint64_t> g;
  std::vector<char> used_sums;  // sums g_i + g_j already taken
  auto mark = [&](std::uint64_t s) {
    if (s >= used_sums.size()) used_sums.resize(s * 2 + 1, 0);
    used_sums[s] = 1;
  };
  auto taken = [&](std::uint64_t s) { return s < used_sums.size() && used_sums[s]; };
  for (std::uint64_t cand = 1; g.size() < r; ++cand) {
    bool ok = !taken(2 * cand);
    for (std::size_t i = 0; ok && i < g.size(); ++i) ok = !taken(g[i] + cand);
    if (!ok) continue;
    for (std::uint64_t x : g) mark(x + cand);
    mark(2 * cand);
    g.push_back(cand);
  }
  return g;
}

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> erdos_turan_sidon(std::size_t r) {
  std::uint64_t p = std::max<std::uint64_t>(r, 2);
  while (!is_prime(p)) ++p;
  std::vector<std::uint64_t> g;
  g.reserve(r);
  // index from 0 so the first element is p's residue term alone; shift by one to stay positive
  for (std::uint64_t i = 0; i < r; ++i) g.push_back(2 * p * i + (i * i) % p + 1);
  return g;
}

}  // namespace

std::vector<std::uint64_t> sidon_sequence(std::size_t r, SidonMethod method) {
  if (r == 0) throw InvalidArgument("Sidon sequence length must be positive");
  if (method == SidonMethod::automatic) method = r <= 256 ? SidonMethod::greedy : SidonMethod::erdos_turan;
  return method == SidonMethod::greedy ? greedy_sidon(r) : erdos_turan_sidon(r);
}

SidonMap::SidonMap(std::vector<double> values, SidonMethod method) : values_(std::move(values)) {
  std::sort(values_.begin(), values_.end());
  values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
  if (values_.empty()) throw InvalidArgument("SidonMap needs at least one value");
  g_ = sidon_sequence(values_.size(), method);
  build_table();
}

SidonMap SidonMap::from_sequence(std::vector<std::uint64_t> g) {
  SidonMap m;
  m.g_ = std::move(g);
  for (std::size_t i = 0; i < m.g_.size(); ++i) m.values_.push_back(static_cast<double>(i + 1));
  m.build_table();
  return m;
}

void SidonMap::build_table() {
  pairs_.reserve(g_.size() * (g_.size() + 1) / 2);
  for (std::size_t i = 0; i < g_.size(); ++i)
    for (std::size_t j = i; j < g_.size(); ++j)
      if (!pairs_.emplace(g_[i] + g_[j], std::make_pair(i + 1, j + 1)).second)
        throw InvalidArgument("sequence is not a Sidon sequence");
}

std::size_t SidonMap::index_of(double v) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), v);
  if (it == values_.end() || *it != v) throw InvalidArgument("value not in SidonMap");
  return static_cast<std::size_t>(it - values_.begin());
}

std::optional<std::pair<std::size_t, std::size_t>> SidonMap::decompose_sum(std::uint64_t sum) const {
  auto it = pairs_.find(sum);
  if (it == pairs_.end()) return std::nullopt;
  return it->second;
}

}  // namespace lanedit
