#pragma once

#include <stdexcept>
#include <string>

namespace normnet {

// Base class for all library failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or contradictory input data: schema violations, duplicate
// titles, redirect cycles, unparseable HTML. The CLI maps these to exit
// code 2.
struct ValidationError : Error {
  using Error::Error;
};

// The caller broke an operation's contract: bad parameter values,
// mismatched lengths, unknown nodes, empty clusters.
struct ArgumentError : Error {
  using Error::Error;
};

// Numerically undefined result: zero variance, all-zero inequality input,
// singular regression design, insufficient data.
struct NumericError : Error {
  using Error::Error;
};

// Iteration budget exhausted before reaching tolerance. Carries the last
// residual seen.
struct ConvergenceError : NumericError {
  ConvergenceError(const std::string& what, double last_residual)
      : NumericError(what), residual(last_residual) {}
  double residual;
};

}  // namespace normnet
