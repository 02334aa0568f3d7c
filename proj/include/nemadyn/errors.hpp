#pragma once

#include <stdexcept>
#include <string>

namespace nemadyn {

/// Non-finite or out-of-domain numeric input.
class InvalidInputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// The requested analysis is not defined for the given parameter regime.
class NotApplicableError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Original-unit and normalized-unit objects were mixed.
class UnitMismatchError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Too little data to produce the requested estimate.
class InsufficientDataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Finite-difference refinement did not converge to the requested accuracy.
class NumericalInstabilityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Two independent computation routes disagreed. Indicates a library bug,
/// never a user error.
class InternalConsistencyError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

} // namespace nemadyn
