#pragma once

#include <stdexcept>
#include <string>

namespace lorentzlab {

// Domain errors thrown by the library. All derive from std::runtime_error so
// callers that only care about pass/fail can catch one type.

struct EmptyInputError : std::runtime_error {
  explicit EmptyInputError(const std::string& m) : std::runtime_error(m) {}
};

struct NotDecreasingError : std::runtime_error {
  explicit NotDecreasingError(const std::string& m) : std::runtime_error(m) {}
};

// The tail integral (or tail sum) of the requested norm does not converge.
struct TailDivergentError : std::runtime_error {
  explicit TailDivergentError(const std::string& m) : std::runtime_error(m) {}
};

struct AtSingularityError : std::runtime_error {
  explicit AtSingularityError(const std::string& m) : std::runtime_error(m) {}
};

struct NotHermitianError : std::runtime_error {
  explicit NotHermitianError(const std::string& m) : std::runtime_error(m) {}
};

struct ZeroMatrixError : std::runtime_error {
  explicit ZeroMatrixError(const std::string& m) : std::runtime_error(m) {}
};

struct DimensionMismatchError : std::runtime_error {
  explicit DimensionMismatchError(const std::string& m) : std::runtime_error(m) {}
};

struct ZeroDifferenceError : std::runtime_error {
  explicit ZeroDifferenceError(const std::string& m) : std::runtime_error(m) {}
};

// An iterative scheme hit its sweep cap before reaching its threshold.
// Never downgraded to a silent return.
struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& m) : std::runtime_error(m) {}
};

struct BadSpecError : std::runtime_error {
  explicit BadSpecError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace lorentzlab
