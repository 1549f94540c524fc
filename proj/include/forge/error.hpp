#pragma once

#include <stdexcept>
#include <string>

namespace forge {

// Domain error hierarchy. The CLI maps these to exit code 1; anything else
// escaping a command is a bug.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller broke an API precondition (wrong shape, non-binary input, ...).
struct ContractError : Error {
  using Error::Error;
};

// Invalid numeric or configuration parameter.
struct ParameterError : Error {
  using Error::Error;
};

// Missing font, file, or other named resource.
struct ResourceError : Error {
  using Error::Error;
};

// Malformed dataset, label, or checkpoint contents.
struct DataError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace forge
