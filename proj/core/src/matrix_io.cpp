#include "lanedit/matrix_io.hpp"

#include "lanedit/errors.hpp"

#include <fstream>
#include <istream>
#include <ostream>

namespace lanedit {

namespace {

std::size_t read_dim(std::istream& in) {
  long long n = -1;
  if (!(in >> n) || n < 0) throw InputError("matrix: expected a non-negative dimension on the first line");
  return static_cast<std::size_t>(n);
}

std::string read_token(std::istream& in, std::size_t i, std::size_t j) {
  std::string tok;
  if (!(in >> tok))
    throw InputError("matrix: missing entry at row " + std::to_string(i + 1) + ", column " +
                     std::to_string(j + 1));
  return tok;
}

template <class M>
M load_with(const std::string& path, M (*reader)(std::istream&)) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open matrix file '" + path + "'");
  return reader(f);
}

}  // namespace

IntMatrix read_int_matrix(std::istream& in) {
  std::size_t n = read_dim(in);
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::string tok = read_token(in, i, j);
      if (tok == "inf" || tok == "+inf") continue;
      try {
        std::size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        m(i, j) = v;
      } catch (const std::exception&) {
        throw InputError("matrix: bad integer '" + tok + "'");
      }
    }
  std::string extra;
  if (in >> extra) throw InputError("matrix: trailing data '" + extra + "'");
  return m;
}

IntMatrix load_int_matrix(const std::string& path) { return load_with<IntMatrix>(path, &read_int_matrix); }

void write_int_matrix(std::ostream& out, const IntMatrix& m) {
  out << m.rows() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      if (m(i, j))
        out << *m(i, j);
      else
        out << "inf";
    }
    out << '\n';
  }
}

RationalMatrix read_rational_matrix(std::istream& in) {
  std::size_t n = read_dim(in);
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::string tok = read_token(in, i, j);
      try {
        m(i, j) = parse_rational(tok);
      } catch (const std::exception&) {
        throw InputError("matrix: bad rational '" + tok + "'");
      }
    }
  std::string extra;
  if (in >> extra) throw InputError("matrix: trailing data '" + extra + "'");
  return m;
}

RationalMatrix load_rational_matrix(const std::string& path) {
  return load_with<RationalMatrix>(path, &read_rational_matrix);
}

void write_rational_matrix(std::ostream& out, const RationalMatrix& m) {
  out << m.rows() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << to_string(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace lanedit
