#include "arat/error.hpp"

namespace arat {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidGame: return "InvalidGame";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kNoBindingRow: return "NoBindingRow";
    case ErrorCode::kSizeGuardExceeded: return "SizeGuardExceeded";
    case ErrorCode::kNoInteriorPointFound: return "NoInteriorPointFound";
    case ErrorCode::kSingularJacobian: return "SingularJacobian";
    case ErrorCode::kNotConverged: return "NotConverged";
    case ErrorCode::kComplementarityResidualTooLarge:
      return "ComplementarityResidualTooLarge";
    case ErrorCode::kNoPureSaddle: return "NoPureSaddle";
    case ErrorCode::kMaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kParse: return "Parse";
  }
  return "Unknown";
}

}  // namespace arat
