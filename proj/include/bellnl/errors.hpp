#pragma once

#include <stdexcept>
#include <string>

namespace bellnl {

/// Out-of-range input/output labels or party indices.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Scenario or strategy table too large to materialize.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Behaviors, functionals or programs defined on incompatible scenarios.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The LP solver broke down or did not reach the requested status.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace bellnl
