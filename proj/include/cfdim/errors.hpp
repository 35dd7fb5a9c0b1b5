#pragma once

#include <stdexcept>
#include <string>

namespace cfdim {

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoRootError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NodesTooSmallError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MonotonicityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotInSchemeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LimitMissingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateLadderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cfdim
