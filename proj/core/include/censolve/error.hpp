#pragma once

#include <stdexcept>
#include <string>

namespace censolve {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition or parameter-range violation.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read, parsed or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// An iterative method stopped without meeting its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved, long iterations)
      : Error(what), achieved_(achieved), iterations_(iterations) {}

  /// Last residual / error estimate reached before giving up.
  double achieved() const noexcept { return achieved_; }
  long iterations() const noexcept { return iterations_; }

 private:
  double achieved_;
  long iterations_;
};

}  // namespace censolve
