#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace npns {

/// Base class for all npns runtime failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Shape/layout mismatch between fields or grids.
class StructuralError : public Error {
public:
    explicit StructuralError(const std::string& what) : Error(what) {}
};

/// Invalid argument values (negative concentration, same-sign valences, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// Pure-Neumann Poisson data violating the solvability condition.
class CompatibilityError : public Error {
public:
    CompatibilityError(const std::string& what, double defect_)
        : Error(what), defect(defect_) {}
    double defect;
};

/// Iterative solver failed to reach tolerance.
class SolverError : public Error {
public:
    SolverError(const std::string& what, std::vector<double> history)
        : Error(what), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

/// Requested transport step exceeds the positivity-safe bound.
class StepRejected : public Error {
public:
    StepRejected(const std::string& what, double dt_max_)
        : Error(what), dt_max(dt_max_) {}
    double dt_max;
};

/// Configuration file or CLI override rejected by validation.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace npns
