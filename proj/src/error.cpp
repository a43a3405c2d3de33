#include "etcsim/error.hpp"

namespace etcsim {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ok: return "ok";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::non_symmetric: return "non_symmetric";
    case ErrorCode::negative_weight: return "negative_weight";
    case ErrorCode::nonzero_diagonal: return "nonzero_diagonal";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::non_finite_derivative: return "non_finite_derivative";
    case ErrorCode::fault_factor_out_of_range: return "fault_factor_out_of_range";
    case ErrorCode::non_positive_gain: return "non_positive_gain";
    case ErrorCode::step_too_large: return "step_too_large";
    case ErrorCode::controller_diverged: return "controller_diverged";
    case ErrorCode::time_regression: return "time_regression";
    case ErrorCode::zero_rate_bound: return "zero_rate_bound";
    case ErrorCode::diverged: return "diverged";
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::schema_error: return "schema_error";
    case ErrorCode::validation_error: return "validation_error";
    case ErrorCode::unknown_plant: return "unknown_plant";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

}  // namespace etcsim
