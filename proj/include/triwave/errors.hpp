#pragma once

#include <stdexcept>
#include <string>

namespace triwave {

/// Rejected input: bad grid, bad parameters, malformed files, incommensurate
/// velocities. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure did not deliver its contract (non-convergence,
/// blowup where none was expected). Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Snapshot or series I/O failure, including corrupt headers.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace triwave
