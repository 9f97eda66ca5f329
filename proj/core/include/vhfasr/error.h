// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VHFASR_ERROR_H_
#define VHFASR_ERROR_H_

#include <stdexcept>
#include <string>

namespace vhfasr {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed an argument that violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class FileNotFound : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// File exists but its contents do not follow the expected layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Well-formed container holding an encoding we do not decode.
class UnsupportedCodec : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace vhfasr

#endif  // VHFASR_ERROR_H_
