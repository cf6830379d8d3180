#pragma once

#include <stdexcept>
#include <string>

namespace memcost {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: topology invariants, negative beta, non-finite numbers.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Value outside the domain of a cost or threshold formula.
class DomainError : public Error {
public:
    using Error::Error;
};

// System too large for exact enumeration; use Monte Carlo instead.
class CapacityError : public Error {
public:
    using Error::Error;
};

// The chain cannot reach its absorbing set.
class ModelError : public Error {
public:
    using Error::Error;
};

// Linear solve failed its residual check or produced non-finite values.
class NumericError : public Error {
public:
    using Error::Error;
};

// Every Monte Carlo trial hit the step cap.
class EstimateError : public Error {
public:
    using Error::Error;
};

// Two cost lines never cross at a finite, nonnegative replenishment cost.
class DegenerateThreshold : public Error {
public:
    using Error::Error;
};

} // namespace memcost
