#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace univalent {

enum class ErrorKind {
  // validation
  InvalidArgument,
  InvalidGeometry,
  InvalidConfig,
  EmptyRegion,
  PathMismatch,
  UnsupportedDomain,
  // numerical
  NonFiniteValue,
  QuadratureInconclusive,
  NoConvergence,
  IllConditioned,
  TargetNonFinite,
  DegreeCapExceeded,
  SingularJacobian,
  StepUnderflow,
  BranchAmbiguity,
  // precondition
  PointOnContour,
  ConstantFunction,
  BoundaryDegeneracy,
  ZeroOnCompact,
  PoleOnCompact,
  WindingMismatch,
  NotLocallyUnivalent,
  OverlappingPieces,
  DegenerateFrame,
  ComplementNotConnected,
  PoleOnContour,
  OutsideDisk,
  InsufficientInterior,
  RangeEscape,
  CriticalPoint,
  NonPositiveTarget,
  Overlap,
  StagesNotSeparable,
  ProbeOnBoundary,
};

enum class ErrorFamily { Validation, Numerical, Precondition };

std::string_view to_string(ErrorKind kind);
std::string_view to_string(ErrorFamily family);
ErrorFamily family_of(ErrorKind kind);

/// Exception carrying a machine-readable kind alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  ErrorFamily family() const noexcept { return family_of(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace univalent
