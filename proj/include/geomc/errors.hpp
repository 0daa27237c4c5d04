#ifndef GEOMC_ERRORS_HPP
#define GEOMC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geomc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (non-finite
/// entries, negative simplex weights, gradient at a zero coordinate, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A point does not lie on the manifold within tolerance.
class MembershipError : public Error {
 public:
  using Error::Error;
};

/// A simplex position sits exactly on a facet where the reflective flow is
/// undefined.
class BoundaryError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown inside a trajectory (reflection budget exhausted,
/// non-finite velocity). Transition kernels treat it as a rejection.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Effective sample size cannot be estimated for the series.
class UndefinedEssError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or data file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Wraps an error raised while running a chain with the step it happened at.
class ChainError : public Error {
 public:
  ChainError(std::size_t step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace geomc

#endif  // GEOMC_ERRORS_HPP
