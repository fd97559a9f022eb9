#pragma once

#include <stdexcept>

namespace privattack {

// Error taxonomy mirrored by the CLI exit codes: ConfigError exits with 2,
// DataError and EligibilityError with 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EligibilityError : DataError {
  using DataError::DataError;
};

}  // namespace privattack
