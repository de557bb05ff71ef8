#pragma once

#include <stdexcept>
#include <string>

namespace nhvqe {

enum class ErrorCode {
  NonPowerOfTwoDim,
  NonFinite,
  UnknownMatrix,
  ParseError,
  DimensionMismatch,
  NotHermitian,
  QubitCountMismatch,
  InvalidVariant,
  ParamCountMismatch,
  NotHermitianInput,
  NoConvergedRuns,
  ConvergenceFailure,
  InvalidArgument,
  IoError,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nhvqe
