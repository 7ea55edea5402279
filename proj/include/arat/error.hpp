#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arat {

enum class ErrorCode {
  kInvalidGame,
  kIndexOutOfRange,
  kDimensionMismatch,
  kPreconditionViolated,
  kNoBindingRow,
  kSizeGuardExceeded,
  kNoInteriorPointFound,
  kSingularJacobian,
  kNotConverged,
  kComplementarityResidualTooLarge,
  kNoPureSaddle,
  kMaxIterExceeded,
  kSingularSystem,
  kParse,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace arat
