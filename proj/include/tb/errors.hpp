#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tb {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };
struct InvariantViolation : Error { using Error::Error; };
struct BoundViolation : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

struct StepFailure : Error {
    StepFailure(const std::string& what, double worst_error)
        : Error(what), worst_local_error(worst_error) {}
    double worst_local_error;
};

struct EscapeError : Error { using Error::Error; };
struct BreakpointStraddle : Error { using Error::Error; };

struct NonConvergence : Error {
    NonConvergence(const std::string& what, std::vector<double> hist)
        : Error(what), history(std::move(hist)) {}
    std::vector<double> history;
};

struct ConventionError : Error { using Error::Error; };

}  // namespace tb
