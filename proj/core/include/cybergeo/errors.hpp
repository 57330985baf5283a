#pragma once

#include <stdexcept>
#include <string>

namespace cybergeo {

// Base of every error raised by the library. Precondition violations on
// arguments use std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or structurally unusable input (maps to CLI exit code 3).
class InputError : public Error {
 public:
  using Error::Error;
};

// An internal consistency check failed (maps to CLI exit code 4).
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace cybergeo
