#ifndef DFO_ERRORS_HPP
#define DFO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dfo {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Point outside the domain of an objective term (e.g. log argument <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Numerical failure: singular factorization, non-converged power iteration.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Iterative inner solver hit its iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (achieved residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Invalid or inconsistent user configuration / problem data.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dfo

#endif  // DFO_ERRORS_HPP
