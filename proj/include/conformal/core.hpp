#pragma once

#include <Eigen/Dense>

#include <sstream>
#include <stdexcept>
#include <string>

namespace conformal {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vecd = Vec<double>;
using Matd = Mat<double>;

// Error hierarchy. Each class corresponds to one failure family of the toolkit;
// callers that only care about "something went wrong" can catch Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Point outside the chart domain, on an excluded set, or an argument outside
/// the admissible range of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A declared invariant of an input field was violated (non-positive factor,
/// asymmetric metric, indefinite "non-negative" tensor).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// A derived metric stopped being positive definite.
class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& what, Vecd witness, double smallest_eigenvalue)
      : Error(what), witness_(std::move(witness)), smallest_eigenvalue_(smallest_eigenvalue) {}

  const Vecd& witness() const { return witness_; }
  double smallest_eigenvalue() const { return smallest_eigenvalue_; }

 private:
  Vecd witness_;
  double smallest_eigenvalue_;
};

class ConditioningError : public Error {
 public:
  using Error::Error;
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Curve with vanishing velocity somewhere on its grid.
class RegularityError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input (expressions, files, truncation tables).
class InputError : public Error {
 public:
  using Error::Error;
};

template <typename Derived>
std::string format_point(const Eigen::MatrixBase<Derived>& x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x(i);
  }
  os << ')';
  return os.str();
}

}  // namespace conformal
