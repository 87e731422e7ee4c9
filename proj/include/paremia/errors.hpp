#pragma once

#include <stdexcept>
#include <string>

namespace paremia {

// Error taxonomy mirrored by the CLI exit codes: config 2, data 3, backend 4.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
  using Error::Error;
};

// Malformed or contract-violating input data (parse errors, bad labels,
// inconsistent matrices, empty preconditions).
struct DataError : Error {
  using Error::Error;
};

struct BackendError : Error {
  using Error::Error;
};

}  // namespace paremia
