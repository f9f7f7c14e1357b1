#pragma once

#include <stdexcept>
#include <string>

namespace qlext {

/// Base class for all errors raised by this library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition.
class precondition_error : public error {
 public:
  using error::error;
};

/// Input data failed structural validation.
class validation_error : public error {
 public:
  using error::error;
};

/// An internal invariant failed; always indicates a bug, never bad input.
class internal_error : public error {
 public:
  using error::error;
};

/// Malformed instance or solution file.
class parse_error : public error {
 public:
  using error::error;
};

/// A generator could not realize the requested configuration.
class generation_error : public error {
 public:
  using error::error;
};

}  // namespace qlext
