#pragma once

#include <stdexcept>
#include <string>

namespace dgh {

/// Configuration or input-file problem (bad predicate coverage, unknown keys, ...).
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Mesh-file syntax or connectivity problem; carries a human-readable location.
class parse_error : public std::runtime_error {
public:
  parse_error(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

/// Recoverable constitutive/kinematic failure: a quadrature point reached
/// det(F) <= 0 (or a law that needs log(J)/C^{-1} was evaluated there).
/// The incremental solver catches this to reject or split the current step.
class invalid_state_error : public std::runtime_error {
public:
  invalid_state_error(const std::string& where, double jacobian)
      : std::runtime_error("invalid state at " + where +
                           ": det(F) = " + std::to_string(jacobian)),
        jacobian_(jacobian) {}
  double jacobian() const { return jacobian_; }

private:
  double jacobian_;
};

/// Numeric failure that is not recoverable by step splitting (singular local
/// mass matrix, eigensolver breakdown, zero pivot in a factorization).
class numeric_error : public std::runtime_error {
public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Requested entity/degree/feature outside what the library supports.
class unsupported_error : public std::runtime_error {
public:
  explicit unsupported_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dgh
