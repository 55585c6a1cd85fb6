#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace setlocal {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition of an operation does not hold for the given arguments.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A color exceeds the palette declared for its assignment.
class PaletteError : public Error {
 public:
  using Error::Error;
};

// An assignment does not cover every node of its graph.
class CoverageError : public Error {
 public:
  using Error::Error;
};

// A construction would exceed its configured size cap.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::size_t projected)
      : Error(what + " (projected " + std::to_string(projected) + ")"), projected_(projected) {}

  std::size_t projected() const noexcept { return projected_; }

 private:
  std::size_t projected_;
};

// A step of a constructive argument failed. This signals a bug: each check
// guards a statement that is proven to hold.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class SimulationError : public Error {
 public:
  using Error::Error;
};

}  // namespace setlocal
