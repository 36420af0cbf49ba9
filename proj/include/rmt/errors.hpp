#pragma once

#include <stdexcept>
#include <string>

namespace rmt {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A tagged point whose coordinates do not match its space's dimension.
class InvalidPoint : public Error {
public:
    using Error::Error;
};

/// A configuration that violates its own invariants (bad weights, negative atoms, ...).
class InvalidConfig : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of an operation (Im z <= 0, index out of range, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Fixed-point solver hit max_iter without meeting tolerance.
class NonConvergence : public Error {
public:
    using Error::Error;
};

/// Solver converged, but to a point outside the region where the solution is unique.
class DomainViolation : public Error {
public:
    using Error::Error;
};

class SingularityError : public Error {
public:
    using Error::Error;
};

/// Input breaks an operation's precondition (non-Hermitian matrix, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

class InsufficientSamples : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace rmt
