#pragma once

#include <stdexcept>
#include <string>

namespace vqt {

/// A documented precondition was not met by the caller.
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the physical domain (e.g. T <= 0).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Matrix is not a valid density matrix (negative eigenvalue, bad trace).
class InvalidStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A quantity that must be real came out with a significant imaginary part.
class NumericConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed configuration (wrong parameter count, bad flag values).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input data problem (CSV parse failure, non-monotone grid, ...).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vqt
