#pragma once

#include <stdexcept>
#include <string>

namespace hydro {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid or degenerate parameters (config validation, division guards).
/// Messages name the offending key path, e.g. "gen.x_d".
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Numeric failure: singular system, non-convergence, overflow.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A finite-difference probe crossed a piecewise-smoothness boundary
/// (deadband edge, vane stop, rate-limit corner).
class SmoothnessError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Trajectory blow-up; carries the time at which it was detected.
class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& what, double time)
      : NumericError(what), time_of_blowup(time) {}
  double time_of_blowup;
};

/// Newton/least-squares refinement did not reach tolerance; carries the
/// final residual norm.
class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, double residual)
      : NumericError(what), final_residual(residual) {}
  double final_residual;
};

}  // namespace hydro
