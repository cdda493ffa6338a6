#ifndef ORTHOREG_ERRORS_HPP
#define ORTHOREG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace orthoreg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of the operands do not agree (non-square input, length mismatch, bad index).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented precondition that is not a shape problem
/// (non-finite entries, parameter out of its domain, bad ordering).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Matrix is singular, or rank-deficient where a unique answer is required.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// An iterative method exhausted its budget or produced non-finite values.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// The Gershgorin test could not certify the series projection.
class CertificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace orthoreg

#endif  // ORTHOREG_ERRORS_HPP
