#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace wem {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input (bad JSON, bad flag values, violated preconditions).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A half-space description that is not a simple integral polytope. kind() is a short tag
/// such as "redundant" or "non-simple"; the message carries the witness.
class ValidationError : public Error {
 public:
  ValidationError(std::string kind, const std::string& what) : Error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

/// Arithmetic on roots of unity whose orders are incompatible with the ambient ring.
class OrderMismatchError : public Error {
 public:
  using Error::Error;
};

/// Inversion of a power series (or ring element) that is not a unit.
class NonInvertibleError : public Error {
 public:
  using Error::Error;
};

/// A mathematical identity that must hold was violated; signals a bug.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Numerical quadrature failed to reach the requested tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

}  // namespace wem
