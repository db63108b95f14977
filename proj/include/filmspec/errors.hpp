#pragma once

#include <stdexcept>
#include <string>

namespace filmspec {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters or sizes outside the admissible range of an operation.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Root refinement was handed an interval without a sign change.
class BracketError : public Error {
public:
    using Error::Error;
};

/// The adaptive spectrum scan hit its upper cap before finding enough roots.
class InsufficientRange : public Error {
public:
    using Error::Error;
};

/// A reconstructed eigenvector failed one of its self-consistency checks.
class ResidualError : public Error {
public:
    using Error::Error;
};

/// Eigenvector and adjoint eigenvector are numerically orthogonal.
class OverlapError : public Error {
public:
    using Error::Error;
};

/// A kernel entry does not fit in binary64.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Dense eigenvalue iteration failed to deflate.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace filmspec
