#include "sftz/errors.hpp"

namespace sftz {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::config_invalid: return "ConfigInvalid";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::zero_row_or_column: return "ZeroRowOrColumn";
    case ErrorCode::reducible_matrix: return "ReducibleMatrix";
    case ErrorCode::periodic_matrix: return "PeriodicMatrix";
    case ErrorCode::inadmissible_point: return "InadmissiblePoint";
    case ErrorCode::inadmissible_word: return "InadmissibleWord";
    case ErrorCode::missing_word: return "MissingWord";
    case ErrorCode::non_positive_roof: return "NonPositiveRoof";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::depth_mismatch: return "DepthMismatch";
    case ErrorCode::non_primitive: return "NonPrimitive";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::bracket_failure: return "BracketFailure";
    case ErrorCode::eigenvalue_collision: return "EigenvalueCollision";
    case ErrorCode::enumeration_budget_exceeded: return "EnumerationBudgetExceeded";
    case ErrorCode::divergent_on_circle: return "DivergentOnCircle";
    case ErrorCode::pole_not_isolated: return "PoleNotIsolated";
    case ErrorCode::horizon_too_small: return "HorizonTooSmall";
    case ErrorCode::domain_error: return "DomainError";
    case ErrorCode::empty_window: return "EmptyWindow";
    case ErrorCode::cone_violation: return "ConeViolation";
    case ErrorCode::non_positive: return "NonPositive";
    case ErrorCode::invalid_regime: return "InvalidRegime";
  }
  return "Unknown";
}

}  // namespace sftz
