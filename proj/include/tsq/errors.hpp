#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tsq {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The k-th moment series diverges for this q (q <= k/(k+1)).
class MomentDoesNotExist : public DomainError {
 public:
  MomentDoesNotExist(int order, double q);
  int order() const noexcept { return order_; }

 private:
  int order_;
};

// An iterative procedure ran out of iterations.
class NoConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Newton denominator vanished; caller must fall back to a bracketing method.
class DegenerateStep : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Least-squares normal equations are rank deficient for the given data.
class SingularFit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file could not be parsed. line() is 1-based, 0 when not line-specific.
class MalformedInput : public std::runtime_error {
 public:
  MalformedInput(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace tsq
