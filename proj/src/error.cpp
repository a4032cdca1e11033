#include "fbp/error.hpp"

namespace fbp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveSpacing: return "NON_POSITIVE_SPACING";
    case ErrorCode::RectTooSmall: return "RECT_TOO_SMALL";
    case ErrorCode::MissingNeighbor: return "MISSING_NEIGHBOR";
    case ErrorCode::OpenBoundary: return "OPEN_BOUNDARY";
    case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::PointNotInterior: return "POINT_NOT_INTERIOR";
    case ErrorCode::PoleEvaluation: return "POLE_EVALUATION";
    case ErrorCode::BallOutsideGrid: return "BALL_OUTSIDE_GRID";
    case ErrorCode::NoRootInBracket: return "NO_ROOT_IN_BRACKET";
    case ErrorCode::AlphaOutOfRange: return "ALPHA_OUT_OF_RANGE";
    case ErrorCode::DeltaOutOfRange: return "DELTA_OUT_OF_RANGE";
    case ErrorCode::SpecInvalid: return "SPEC_INVALID";
    case ErrorCode::EmptyFreeBoundary: return "EMPTY_FREE_BOUNDARY";
    case ErrorCode::GridMismatch: return "GRID_MISMATCH";
    case ErrorCode::PointNotOnBoundary: return "POINT_NOT_ON_BOUNDARY";
    case ErrorCode::EmptyComponent: return "EMPTY_COMPONENT";
    case ErrorCode::ComponentCountMismatch: return "COMPONENT_COUNT_MISMATCH";
    case ErrorCode::EmptyPositivitySet: return "EMPTY_POSITIVITY_SET";
    case ErrorCode::RadiusTooSmall: return "RADIUS_TOO_SMALL";
    case ErrorCode::OverlappingSupports: return "OVERLAPPING_SUPPORTS";
    case ErrorCode::CenterNotOnBothBoundaries: return "CENTER_NOT_ON_BOTH_BOUNDARIES";
    case ErrorCode::WindowOutsideGrid: return "WINDOW_OUTSIDE_GRID";
    case ErrorCode::InvalidUsage: return "INVALID_USAGE";
    case ErrorCode::ConfigInvalid: return "CONFIG_INVALID";
    case ErrorCode::IoFailure: return "IO_FAILURE";
    case ErrorCode::SeriesMissing: return "SERIES_MISSING";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace fbp
