#pragma once

#include <stdexcept>
#include <string>

namespace acdg {

/// Raised for malformed inputs: bad sizes, out-of-range ids, mismatched spaces.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A quadrature rule of the requested exactness is not available.
class UnsupportedDegree : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Iterative or direct linear solve did not reach its tolerance.
class LinearSolverFailure : public std::runtime_error {
public:
  LinearSolverFailure(const std::string& what, int iterations)
      : std::runtime_error(what), iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

private:
  int iterations_;
};

/// A projection or other assembled system could not be solved.
class SolverFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Eigenvalue probe or other diagnostic computation failed.
class DiagnosticsFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Distance query against a curve with no segments.
class EmptyInterface : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Configuration could not be parsed or validated. The message lists every problem found.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace acdg
