#pragma once

#include <stdexcept>
#include <string>

namespace monoper {

/// Operand shapes do not agree (vector length, grid size, period).
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The shifted semigroup is not exponentially stable where stability is required.
class StabilityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A lower or upper solution fails its differential inequality, or v0 <= w0 fails.
class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hypothesis constants are missing or inconsistent.
class ConstantsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure: non-convergent eigensolver, non-finite values, divergence.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace monoper
