#pragma once

#include <stdexcept>
#include <string>

namespace rfsense {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Zero-forcing is not applicable: the stacked channel matrix is not of full
/// column rank (too few receive dimensions or an ill-conditioned Gram matrix).
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// The closed-form MRC SINR assumes equal sensor and fusion-center noise.
class NoiseMismatch : public Error {
 public:
  using Error::Error;
};

class UnboundVariable : public Error {
 public:
  using Error::Error;
};

class EmptyPosynomial : public Error {
 public:
  using Error::Error;
};

/// No strictly feasible point exists (GP phase I failed or a signomial start
/// search came up short).
class Infeasible : public Error {
 public:
  using Error::Error;
};

/// The point handed to the successive-condensation loop violates the true
/// constraints.
class StartInfeasible : public Error {
 public:
  using Error::Error;
};

/// Newton iterations stagnated; the message carries the diagnostics.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line = 0, int column = 0)
      : Error(message), line_(line), column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace rfsense
