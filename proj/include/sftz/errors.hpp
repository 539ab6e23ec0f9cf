#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sftz {

// Numeric values double as CLI exit codes.
enum class ErrorCode : int {
  config_invalid = 2,
  invalid_argument = 3,
  zero_row_or_column = 10,
  reducible_matrix = 11,
  periodic_matrix = 12,
  inadmissible_point = 13,
  inadmissible_word = 14,
  missing_word = 15,
  non_positive_roof = 16,
  dimension_mismatch = 17,
  depth_mismatch = 18,
  non_primitive = 19,
  no_convergence = 20,
  bracket_failure = 21,
  eigenvalue_collision = 22,
  enumeration_budget_exceeded = 23,
  divergent_on_circle = 24,
  pole_not_isolated = 25,
  horizon_too_small = 26,
  domain_error = 27,
  empty_window = 28,
  cone_violation = 29,
  non_positive = 30,
  invalid_regime = 31,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  int exit_code() const noexcept { return static_cast<int>(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace sftz
