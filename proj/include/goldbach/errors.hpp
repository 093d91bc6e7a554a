#pragma once

#include <stdexcept>

namespace goldbach {

// Invalid argument values: parity violations, bad ordering, zero modulus,
// malformed CLI input.
struct ParamError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Memory or allocation budget exceeded.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Broken internal precondition (e.g. a q-lookup outside the sieved range).
// These indicate a bug, never a user error.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace goldbach
