// Error taxonomy shared by the library and the CLI exit-code mapping.
#pragma once

#include <stdexcept>

namespace ssdlab {

// Bad user-supplied parameters or config (CLI exit code 1).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The device cannot make forward progress, or a workload oversubscribes it
// (CLI exit code 3).
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A module contract was broken (bookkeeping mismatch, Trim of a not-In-Use
// object, ...). Indicates a bug, not bad input (CLI exit code 3).
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

// An analytic model was evaluated outside its domain (CLI exit code 1).
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ssdlab
