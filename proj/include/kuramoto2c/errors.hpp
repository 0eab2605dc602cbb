#pragma once

#include <stdexcept>
#include <string>

namespace kuramoto2c {

// Argument outside the mathematical domain of an operation (bad order,
// negative radicand, L >= 0 where a bifurcation needs L < 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure failed to deliver its contract (no bracket,
// quadrature did not converge, non-finite state in a time stepper).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or parameter set supplied by the caller.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kuramoto2c
