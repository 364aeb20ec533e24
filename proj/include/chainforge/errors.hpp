#pragma once

#include <stdexcept>
#include <string>

namespace chainforge {

// Error taxonomy mirrors the CLI exit-code contract:
//   SpecError/DomainError -> 2, ResourceError -> 3, InternalError -> 4.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (spec files, descriptors, preconditions).
struct SpecError : Error {
  using Error::Error;
};

// Precondition violations on otherwise well-formed values
// (element outside parent, mismatched prime lists, ...).
struct DomainError : SpecError {
  using SpecError::SpecError;
};

// An operation would exceed the configured enumeration bound.
struct ResourceError : Error {
  using Error::Error;
};

// A generator-image assignment that is not a homomorphism.
struct InvalidHomomorphism : DomainError {
  using DomainError::DomainError;
};

// A computed value contradicts an invariant the code relies on.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace chainforge
