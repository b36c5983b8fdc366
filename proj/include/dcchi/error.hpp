// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace dcchi {

/// Error categories. The numeric values are shared with the C API status
/// codes and, for the first four, with the CLI exit codes.
enum class ErrorCode : int {
  invalid_argument = 1,
  config = 2,
  numeric = 3,
  format = 4,
  dimension = 5,
  state = 6,
  io = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define DCCHI_DEFINE_ERROR(Name, Code)                                  \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& what) : Error(ErrorCode::Code, what) {} \
  };

DCCHI_DEFINE_ERROR(InvalidArgument, invalid_argument)
DCCHI_DEFINE_ERROR(ConfigError, config)
DCCHI_DEFINE_ERROR(NumericError, numeric)
DCCHI_DEFINE_ERROR(FormatError, format)
DCCHI_DEFINE_ERROR(DimensionError, dimension)
DCCHI_DEFINE_ERROR(StateError, state)
DCCHI_DEFINE_ERROR(IoError, io)

#undef DCCHI_DEFINE_ERROR

}  // namespace dcchi
