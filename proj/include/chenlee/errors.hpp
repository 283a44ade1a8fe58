#pragma once

#include <stdexcept>

namespace chenlee {

// Error taxonomy mirrors the CLI exit-code contract:
// precondition violations exit 2, numerical failures 3, I/O failures 4.

struct precondition_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace chenlee
