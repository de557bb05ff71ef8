#include "nhvqe/errors.hpp"

namespace nhvqe {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPowerOfTwoDim: return "NonPowerOfTwoDim";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::UnknownMatrix: return "UnknownMatrix";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::QubitCountMismatch: return "QubitCountMismatch";
    case ErrorCode::InvalidVariant: return "InvalidVariant";
    case ErrorCode::ParamCountMismatch: return "ParamCountMismatch";
    case ErrorCode::NotHermitianInput: return "NotHermitianInput";
    case ErrorCode::NoConvergedRuns: return "NoConvergedRuns";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace nhvqe
