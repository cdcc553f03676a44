#pragma once

#include <stdexcept>
#include <string>

namespace sdnsim {

// Caller handed us something outside the documented input range.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An internal precondition was broken; indicates a bug in the caller, not bad input.
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace sdnsim
