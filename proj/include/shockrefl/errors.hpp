#pragma once

#include <stdexcept>
#include <string>

namespace shockrefl {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied parameters outside the operation's domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Non-positive argument of the inverse enthalpy: vacuum or otherwise invalid state.
class CavitationError : public Error {
public:
    using Error::Error;
};

/// Normal component not supersonic, so only the trivial (no-jump) solution exists.
class NoShockError : public DomainError {
public:
    using DomainError::DomainError;
};

class InadmissibleAngleError : public DomainError {
public:
    using DomainError::DomainError;
};

class DegenerateJumpError : public DomainError {
public:
    using DomainError::DomainError;
};

class SubsonicUpstreamError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Requested turn angle exceeds the critical angle of the polar.
class DetachmentError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Sector 2 is not supersonic in the reflection-point frame, so no reflected polar exists.
class NoReflectedPolarError : public DomainError {
public:
    using DomainError::DomainError;
};

class GeometryError : public DomainError {
public:
    using DomainError::DomainError;
};

class PreconditionError : public DomainError {
public:
    using DomainError::DomainError;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Iterative solver did not converge or lost its bracket.
class NumericalError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace shockrefl
