#pragma once

#include <stdexcept>
#include <string>

namespace svardisc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad preconditions, malformed configs or files.  CLI maps these to exit 2.
struct InvalidArgument : Error {
    using Error::Error;
};

// Simulated series exceeded the overflow threshold after all rescale retries.
// CLI maps these to exit 3.
struct SimulationOverflow : Error {
    using Error::Error;
};

// A CI backend failed while answering a query.  CLI maps these to exit 4.
struct BackendError : Error {
    using Error::Error;
};

// Too few samples for the requested conditioning dimension.
struct InsufficientSamples : BackendError {
    using BackendError::BackendError;
};

}  // namespace svardisc
