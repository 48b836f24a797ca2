#pragma once

#include <stdexcept>
#include <string>

namespace ega {

// Error taxonomy maps 1:1 onto C API status codes and CLI exit codes:
// validation -> 1, io -> 2, numeric -> 3.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ega
