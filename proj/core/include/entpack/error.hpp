#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace entpack {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a mathematical function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The requested instance cannot be completed at all (e.g. n > t_max).
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// An integer count does not fit the 64-bit result type.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// A caller broke a documented precondition; indicates a bug, not bad input.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Policy evaluation did not reach its tolerance, or the policy never completes.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, double residual, std::int64_t iterations)
        : Error(what), residual_(residual), iterations_(iterations) {}

    double residual() const noexcept { return residual_; }
    std::int64_t iterations() const noexcept { return iterations_; }

private:
    double residual_;
    std::int64_t iterations_;
};

/// A simulated episode exceeded the step horizon.
class StepCapError : public Error {
public:
    StepCapError(const std::string& what, std::int64_t completed_episodes)
        : Error(what), completed_(completed_episodes) {}

    std::int64_t completed_episodes() const noexcept { return completed_; }

private:
    std::int64_t completed_;
};

}  // namespace entpack
