#pragma once

#include <stdexcept>
#include <string>

namespace spb {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad input data: malformed distributions, mismatched alphabets, invalid codes.
struct ValidationError : Error {
  using Error::Error;
};

// An enumeration would exceed the configured item cap.
struct CapExceeded : Error {
  using Error::Error;
};

}  // namespace spb
