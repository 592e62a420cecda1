#pragma once

#include <stdexcept>
#include <string>

namespace parrondo {

/// Malformed textual input (rational literals, pattern words, flags).
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A parameter or matrix lies outside the domain an operation accepts.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NotStochasticError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ReducibleChainError : public DomainError {
 public:
  using DomainError::DomainError;
};

class SingularMatrixError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Closed-form spectral formulas are unavailable at this parameter point
/// (repeated eigenvalues, or a vanishing denominator). Callers fall back to
/// the matrix-power methods.
class DegenerateParametersError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace parrondo
