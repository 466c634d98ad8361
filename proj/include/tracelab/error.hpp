#pragma once

#include <stdexcept>
#include <string>

namespace tracelab {

enum class ErrorCode {
  DimensionMismatch = 1,
  NonRealTrace,
  ConvergenceFailure,
  DomainError,
  InvalidExponent,
  InvalidParameter,
  InvalidArgument,
  NotHermitian,
  NotPsd,
  ParseError,
  IoError,
};

const char* error_code_name(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code; the C API maps it onto tl_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tracelab
