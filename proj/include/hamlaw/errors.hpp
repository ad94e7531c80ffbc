#pragma once

#include <stdexcept>
#include <string>

namespace hamlaw {

// Bad input to a public operation (out-of-range vertex, wrong arity, ell >= r, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A configured search/enumeration cap would be exceeded. Never a wrong answer.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The requested structure does not exist (e.g. two Hamilton cycles sharing m-1 edges when s = 1).
class InfeasibleConfiguration : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A self-check tripped: an ordered count did not divide exactly by its symmetry factor.
class InternalConsistency : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed config / CLI input. Maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hamlaw
