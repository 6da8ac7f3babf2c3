#pragma once

#include <stdexcept>
#include <string>

namespace frobenius {

/// Invalid caller input (negative index, bad configuration, wrong model kind).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation point outside the domain of the radial equation (rho <= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical self-check failed. This signals a bug or a breakdown of
/// floating-point accuracy, not bad user input.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace frobenius
