#pragma once

#include <stdexcept>
#include <string>

namespace nlevel {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented precondition or type invariant.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Spectrum too close to degenerate for the requested closed-form path.
class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

// Iteration limits, overflow, lost accuracy.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace nlevel
