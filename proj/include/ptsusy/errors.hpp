#pragma once

#include <stdexcept>
#include <string>

namespace ptsusy {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter record violates one of its family invariants.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation hit a pole (sinh z = 0, cosh z = 0, p(x) = 0, ...).
class PoleError : public Error {
public:
    PoleError(const std::string& function, const std::string& detail = {})
        : Error("pole of " + function + (detail.empty() ? "" : ": " + detail)), function_(function) {}

    const std::string& function() const noexcept { return function_; }

private:
    std::string function_;
};

/// A level index outside the finite tower of bound states.
class LevelRangeError : public Error {
public:
    LevelRangeError(int n, int n_max)
        : Error("level n=" + std::to_string(n) + " exceeds n_max=" + std::to_string(n_max)), n_(n), n_max_(n_max) {}

    int n() const noexcept { return n_; }
    int n_max() const noexcept { return n_max_; }

private:
    int n_;
    int n_max_;
};

/// Caller broke an operation's contract (wrong state, mismatched grids, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Iterative numerics failed (degenerate recurrence, eigensolver breakdown).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace ptsusy
