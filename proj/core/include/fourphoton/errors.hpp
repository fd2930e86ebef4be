#pragma once

#include <stdexcept>

namespace fourphoton {

// Precondition violations use std::invalid_argument. The two types below
// separate numerical failures from I/O so callers (the CLI) can map them to
// distinct exit codes.

/// A computation produced a result that contradicts a structural invariant.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fourphoton
