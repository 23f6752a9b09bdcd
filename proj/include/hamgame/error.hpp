#pragma once

#include <stdexcept>
#include <string>

namespace hamgame {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not agree (matrix sizes, factor dims, profile vs game).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A numerical precondition failed: non-Hermitian, non-PSD, non-finite, ...
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Invalid argument value that is not a shape problem (unknown name, bad label).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace hamgame
