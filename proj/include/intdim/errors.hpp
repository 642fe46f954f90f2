#pragma once

#include <stdexcept>
#include <string>

namespace intdim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates an operation's precondition. `field()` names it.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A point or memory budget would be exceeded.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The equilibrium solver could not certify its result.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double achieved_gap)
      : Error(what), achieved_gap_(achieved_gap) {}
  double achieved_gap() const noexcept { return achieved_gap_; }

 private:
  double achieved_gap_;
};

namespace detail {

inline void require(bool condition, const char* field, const std::string& what) {
  if (!condition) throw ValidationError(field, what);
}

}  // namespace detail
}  // namespace intdim
