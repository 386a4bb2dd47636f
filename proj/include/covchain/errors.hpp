#pragma once

#include <stdexcept>
#include <string>

namespace covchain {

// Structurally invalid input: bad transition matrix, malformed file,
// inadmissible partition sequence, unknown chain kind.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A documented size cap was exceeded (exact solvers, generators).
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A stated hypothesis of a check does not hold for the given instance.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Linear solver failure (singular or badly conditioned system).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace covchain
