#ifndef LAGHAT_ERRORS_HPP
#define LAGHAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace laghat {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Request exceeds a compiled-in table or degree limit.
struct CapacityError : std::length_error {
    explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

// A numerical routine failed to converge or produced an invalid state.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive integration could not reach the requested tolerance.
// Carries the best estimate obtained so far.
struct ToleranceError : std::runtime_error {
    double best_estimate;
    double achieved_tolerance;
    ToleranceError(const std::string& what, double best, double achieved)
        : std::runtime_error(what), best_estimate(best), achieved_tolerance(achieved) {}
};

// An integrand evaluated to a non-finite value; carries the offending node.
struct EvaluationError : std::runtime_error {
    double node;
    EvaluationError(const std::string& what, double where)
        : std::runtime_error(what), node(where) {}
};

// Evaluation point too close to the support of the input function.
struct ProximityError : std::invalid_argument {
    explicit ProximityError(const std::string& what) : std::invalid_argument(what) {}
};

// An atom or decomposition failed its defining clauses.
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A sweep or run configuration is internally inconsistent.
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace laghat

#endif
