#pragma once

#include <stdexcept>
#include <string>

namespace boot3d {

enum class ErrorCode {
  invalid_input,
  degenerate_input,
  missing_landmark,
  invalid_config,
  io_failure,
  numerical_failure,
};

/// All library failures surface as Error; `code()` maps to CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

  const char* code_name() const {
    switch (code_) {
      case ErrorCode::invalid_input: return "invalid-input";
      case ErrorCode::degenerate_input: return "degenerate-input";
      case ErrorCode::missing_landmark: return "missing-landmark";
      case ErrorCode::invalid_config: return "invalid-config";
      case ErrorCode::io_failure: return "io-failure";
      case ErrorCode::numerical_failure: return "numerical-failure";
    }
    return "unknown";
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_error(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace boot3d
