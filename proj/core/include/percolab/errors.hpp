#pragma once

#include <stdexcept>
#include <string>

namespace percolab {

// Base class for every error raised by the library. The subclasses mirror the
// error kinds named in the module contracts so callers can dispatch on them.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// Requested instance would exceed a configured size limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Numerical range guard tripped (e.g. precision budget exhausted).
class RangeError : public Error {
 public:
  using Error::Error;
};

class BracketError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFamily : public Error {
 public:
  using Error::Error;
};

class DegenerateCutoff : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Raised for malformed experiment or suite configuration (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace percolab
