#pragma once

#include <stdexcept>
#include <string>

namespace preypred {

// Error taxonomy mirrors the CLI exit codes: validation problems exit 1,
// runtime/numeric problems exit 2, I/O problems exit 3.

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside an operation's mathematical domain (x = 0 on the prey
// nullcline, degenerate event denominator, ...).
struct DomainError : ValidationError {
    using ValidationError::ValidationError;
};

// A dichotomy bracket whose endpoints do not straddle the target.
struct BracketError : ValidationError {
    using ValidationError::ValidationError;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Poincare returns did not converge, or the regime has no cycle at all.
struct NoCycleError : NumericError {
    using NumericError::NumericError;
};

// Expected or actual jump-event count exceeds the configured budget.
struct EventBudgetError : NumericError {
    using NumericError::NumericError;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace preypred
