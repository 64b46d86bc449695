#pragma once

#include <stdexcept>
#include <string>

namespace guesswork {

enum class ErrorKind {
  Validation,        // malformed input, violated precondition
  Numerical,         // eigensolver/solver failure
  SizeCap,           // problem exceeds a configured size limit
  Restriction,       // c_inf = inf with K < |X| where a finite model is required
  Budget,            // time budget exhausted before any result
};

/// Single exception type for the library; the kind maps onto CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual)
      : Error(ErrorKind::Numerical, what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorKind::Validation, what);
}

}  // namespace guesswork
