#pragma once

#include <stdexcept>
#include <string>

namespace potcap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value failed one of its type invariants (Hermiticity, CPTP, isometry...).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class LabelError : public Error {
 public:
  using Error::Error;
};

// Raised by the command-line layer for malformed configs and channel specs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace potcap
