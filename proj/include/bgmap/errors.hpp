#pragma once

#include <stdexcept>
#include <string>

namespace bgmap {

/// Bad inputs, preconditions, or configuration. CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown (failed factorization, non-convergence). CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bgmap
