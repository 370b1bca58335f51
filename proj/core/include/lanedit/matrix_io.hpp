#pragma once

#include "lanedit/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lanedit {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

/// nullopt stands for +infinity.
using IntEntry = std::optional<std::int64_t>;
using IntMatrix = Matrix<IntEntry>;
using RationalMatrix = Matrix<Rational>;

/// First line n, then n rows of n whitespace-separated integers; "inf" allowed.
IntMatrix read_int_matrix(std::istream& in);
IntMatrix load_int_matrix(const std::string& path);
void write_int_matrix(std::ostream& out, const IntMatrix& m);

/// Same layout with entries "p/q", integers or decimals.
RationalMatrix read_rational_matrix(std::istream& in);
RationalMatrix load_rational_matrix(const std::string& path);
void write_rational_matrix(std::ostream& out, const RationalMatrix& m);

}  // namespace lanedit
