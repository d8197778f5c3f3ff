#pragma once

#include <stdexcept>
#include <string>

namespace carroll {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-side precondition was violated (bad grid, out-of-range target, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The computation itself broke down: singular point, non-finite value,
/// degenerate map, or a declared tolerance that was not met.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace carroll
