#pragma once

#include <stdexcept>
#include <string>

namespace linbill {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invariant or postcondition re-check failed.
class VerificationError : public Error {
public:
    using Error::Error;
};

/// A solver could not produce a result (singular system, missing root, ...).
class SolverError : public Error {
public:
    using Error::Error;
};

/// Working precision exhausted: "vanishing" coefficients are no longer small.
class ToleranceCollapse : public Error {
public:
    using Error::Error;
};

class ResonantRotation : public SolverError {
public:
    using SolverError::SolverError;
};

class DegreeMismatch : public Error {
public:
    using Error::Error;
};

class NonUnit : public SolverError {
public:
    using SolverError::SolverError;
};

class NonzeroConstantTerm : public Error {
public:
    using Error::Error;
};

class ResonantInput : public SolverError {
public:
    using SolverError::SolverError;
};

class NonDiagonalInput : public Error {
public:
    using Error::Error;
};

class BadSeed : public Error {
public:
    using Error::Error;
};

class NoRoot : public SolverError {
public:
    using SolverError::SolverError;
};

class DegeneratePivot : public SolverError {
public:
    using SolverError::SolverError;
};

class VerificationFailed : public VerificationError {
public:
    using VerificationError::VerificationError;
};

class SingularDegree : public SolverError {
public:
    using SolverError::SolverError;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace linbill
