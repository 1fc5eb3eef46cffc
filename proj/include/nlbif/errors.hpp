#pragma once

#include <stdexcept>
#include <string>

namespace nlbif {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (E >= E_max, lambda <= j^2, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative method (quadrature, root finding, shooting) failed to reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Input functions violate a structural requirement (dissipativity, positivity, ordering).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// The requested gradient-energy range is not reachable below the energy cutoff.
class HorizonError : public Error {
public:
    HorizonError(const std::string& what, double achievable_r_max)
        : Error(what), achievable_r_max_(achievable_r_max) {}

    double achievable_r_max() const noexcept { return achievable_r_max_; }

private:
    double achievable_r_max_;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace nlbif
