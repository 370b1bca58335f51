#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lanedit {

/// Malformed grammar text or a grammar that violates a structural requirement.
class GrammarError : public std::runtime_error {
 public:
  explicit GrammarError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A string symbol that the grammar has no terminal for.
class UnknownSymbolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The grammar generates no string at all.
class EmptyLanguageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Probabilities of an SCFG do not form a distribution per nonterminal.
class DistributionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation would exceed a configured size bound (expanded matrix, bigint bits).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument values (shape mismatch, out-of-range parameters).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unreadable or malformed input file.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lanedit
