#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mi {

/// Base class for all library errors. `kind()` returns a stable
/// machine-readable tag used by the CLI when emitting error JSON.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual const char* kind() const noexcept { return "error"; }
};

/// Expression text could not be parsed; `offset` is the byte position
/// in the input where the problem was detected.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }
    const char* kind() const noexcept override { return "parse_error"; }

private:
    std::size_t offset_;
};

/// Evaluation outside the domain of an operation (sqrt of a negative,
/// jet of abs at the origin, division by zero, ...).
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain_error"; }
};

/// A dispersion symbol failed a structural requirement (evenness,
/// normalization) needed by the operation that raised the error.
class HypothesisError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "hypothesis_error"; }
};

/// A mode hit a (near-)vanishing denominator j(rho) - j(rho n).
class ResonanceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "resonance_error"; }
};

/// Input to an inversion carried a component along the kernel mode cos z.
class KernelError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "kernel_error"; }
};

/// An iteration or bracketing search failed to converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "convergence_error"; }
};

/// Bad caller-supplied argument (outside any numeric subtlety).
class InvalidArgument : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid_argument"; }
};

} // namespace mi
