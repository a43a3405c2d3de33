#pragma once

#include <stdexcept>
#include <string>

namespace etcsim {

// Stable error identifiers, mirrored one-to-one by the C API status codes.
enum class ErrorCode : int {
  ok = 0,
  invalid_argument = 1,
  non_symmetric = 2,
  negative_weight = 3,
  nonzero_diagonal = 4,
  dimension_mismatch = 5,
  non_finite_derivative = 6,
  fault_factor_out_of_range = 7,
  non_positive_gain = 8,
  step_too_large = 9,
  controller_diverged = 10,
  time_regression = 11,
  zero_rate_bound = 12,
  diverged = 13,
  non_finite = 14,
  schema_error = 15,
  validation_error = 16,
  unknown_plant = 17,
  io_error = 18,
  internal = 19,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace etcsim
