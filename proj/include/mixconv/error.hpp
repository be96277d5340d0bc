#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mixconv {

enum class ErrorCode {
  InvalidControls,
  InvalidParams,
  ParamMismatch,
  WrongBranch,
  BracketFailure,
  Precondition,
  EmptySeries,
  NotMonotone,
  Domain,
  GridMismatch,
  WrongClass,
  WindowTooShort,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code; what() is "<CODE>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mixconv
