#pragma once

#include <stdexcept>

namespace ellalloc {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Vector/matrix sizes that do not agree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base for failures of a numerical procedure on otherwise valid input.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotSpdError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Quadrature or root search could not reach its tolerance within budget.
class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// An expected-utility moment is infinite for the requested position.
class DivergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The fully-invested normalisation 1'V^-1 alpha vanishes.
class DegenerateConstraintError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace ellalloc
