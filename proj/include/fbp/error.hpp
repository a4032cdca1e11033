#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fbp {

enum class ErrorCode {
  NonPositiveSpacing,
  RectTooSmall,
  MissingNeighbor,
  OpenBoundary,
  NoConvergence,
  PointNotInterior,
  PoleEvaluation,
  BallOutsideGrid,
  NoRootInBracket,
  AlphaOutOfRange,
  DeltaOutOfRange,
  SpecInvalid,
  EmptyFreeBoundary,
  GridMismatch,
  PointNotOnBoundary,
  EmptyComponent,
  ComponentCountMismatch,
  EmptyPositivitySet,
  RadiusTooSmall,
  OverlappingSupports,
  CenterNotOnBothBoundaries,
  WindowOutsideGrid,
  InvalidUsage,
  ConfigInvalid,
  IoFailure,
  SeriesMissing,
};

/// Upper-snake name of the code, e.g. "NON_POSITIVE_SPACING".
std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
/// what() is "<CODE>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fbp
