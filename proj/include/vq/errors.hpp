#pragma once

#include <stdexcept>
#include <string>

namespace vq {

/// Argument outside the mathematical domain of the requested function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The quantity is infinite at the requested point (e.g. V_q(0) for q <= -1/2).
class DivergenceError : public DomainError {
public:
    using DomainError::DomainError;
};

/// An evaluation method did not reach its accuracy target.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& method, const std::string& what)
        : std::runtime_error(method + ": " + what), method_(method) {}

    const std::string& method() const noexcept { return method_; }

private:
    std::string method_;
};

class UnsupportedFeature : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Bad configuration handed to the verifier or CLI (unknown suite, empty grid, ...).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace vq
