#pragma once

#include <stdexcept>
#include <string>

namespace kerrfem {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: bad mesh, out-of-range index, violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Iterative or nonlinear solver failure. `residual` is the last measured
/// residual norm in the solver's own scaling.
class SolverError : public Error {
 public:
  enum class Kind { Breakdown, NotConverged };

  SolverError(Kind kind, double residual, const std::string& what)
      : Error(what), kind_(kind), residual_(residual) {}

  Kind kind() const { return kind_; }
  double residual() const { return residual_; }

 private:
  Kind kind_;
  double residual_;
};

/// Filesystem or parse failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace kerrfem
