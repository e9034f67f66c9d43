#pragma once

#include <stdexcept>
#include <string>

namespace lgf {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The requested quantity is infinite (e.g. a = 0 with d <= 2q).
class DivergenceError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A numerical method did not reach its tolerance. Carries the best estimate.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double best_estimate, double est_error)
        : std::runtime_error(what), best_estimate_(best_estimate), est_error_(est_error) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double est_error() const noexcept { return est_error_; }

private:
    double best_estimate_;
    double est_error_;
};

/// Valid input that this implementation does not handle (cost or method limits).
class UnsupportedError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Inconsistent configuration object.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace lgf
