#include "pedmotion/error.hpp"

namespace pedmotion {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "invalid_input";
    case ErrorCode::InvalidRotation: return "invalid_rotation";
    case ErrorCode::Degenerate6D: return "degenerate_6d";
    case ErrorCode::Parse: return "parse_error";
    case ErrorCode::Validation: return "validation_error";
    case ErrorCode::Processing: return "processing_error";
    case ErrorCode::PlannerTimeout: return "planner_timeout";
  }
  return "unknown";
}

}  // namespace pedmotion
