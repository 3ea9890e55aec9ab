#ifndef CIRCDIFF_ERRORS_HPP
#define CIRCDIFF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace circdiff {

/// Malformed or inconsistent input data (CSV ingestion, degenerate series).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid run configuration (CLI / config file level).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical procedure failed (solver breakdown, fit failure).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Circular mean of a sample with (numerically) zero resultant length.
class DegenerateMeanError : public std::domain_error {
public:
    explicit DegenerateMeanError(const std::string& msg) : std::domain_error(msg) {}
};

/// The von Mises TPD formula is singular: gamma*sigma^2*t is numerically zero.
/// Callers should fall back to the short-time wrapped-normal limit.
class NearSingularTimeError : public NumericalError {
public:
    explicit NearSingularTimeError(const std::string& msg) : NumericalError(msg) {}
};

/// Crank-Nicolson linear system could not be solved.
class SolverFailureError : public NumericalError {
public:
    explicit SolverFailureError(const std::string& msg) : NumericalError(msg) {}
};

}  // namespace circdiff

#endif  // CIRCDIFF_ERRORS_HPP
