#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pedmotion {

/// Machine-readable error categories. The CLI maps the first group
/// (input problems) to exit code 1 and everything else to exit code 2.
enum class ErrorCode {
  InvalidInput,     // non-finite or out-of-domain argument
  InvalidRotation,  // matrix is not in SO(3)
  Degenerate6D,     // 6D vectors zero or parallel
  Parse,            // document does not follow its schema
  Validation,       // document parses but breaks a type invariant
  Processing,       // runtime failure inside a stage
  PlannerTimeout,   // planner exceeded its tick budget
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  bool is_input_error() const noexcept {
    return code_ == ErrorCode::InvalidInput || code_ == ErrorCode::InvalidRotation ||
           code_ == ErrorCode::Degenerate6D || code_ == ErrorCode::Parse ||
           code_ == ErrorCode::Validation;
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace pedmotion
