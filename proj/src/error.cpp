#include "univalent/error.hpp"

namespace univalent {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidGeometry: return "InvalidGeometry";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::EmptyRegion: return "EmptyRegion";
    case ErrorKind::PathMismatch: return "PathMismatch";
    case ErrorKind::UnsupportedDomain: return "UnsupportedDomain";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::QuadratureInconclusive: return "QuadratureInconclusive";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::TargetNonFinite: return "TargetNonFinite";
    case ErrorKind::DegreeCapExceeded: return "DegreeCapExceeded";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorKind::PointOnContour: return "PointOnContour";
    case ErrorKind::ConstantFunction: return "ConstantFunction";
    case ErrorKind::BoundaryDegeneracy: return "BoundaryDegeneracy";
    case ErrorKind::ZeroOnCompact: return "ZeroOnCompact";
    case ErrorKind::PoleOnCompact: return "PoleOnCompact";
    case ErrorKind::WindingMismatch: return "WindingMismatch";
    case ErrorKind::NotLocallyUnivalent: return "NotLocallyUnivalent";
    case ErrorKind::OverlappingPieces: return "OverlappingPieces";
    case ErrorKind::DegenerateFrame: return "DegenerateFrame";
    case ErrorKind::ComplementNotConnected: return "ComplementNotConnected";
    case ErrorKind::PoleOnContour: return "PoleOnContour";
    case ErrorKind::OutsideDisk: return "OutsideDisk";
    case ErrorKind::InsufficientInterior: return "InsufficientInterior";
    case ErrorKind::RangeEscape: return "RangeEscape";
    case ErrorKind::CriticalPoint: return "CriticalPoint";
    case ErrorKind::NonPositiveTarget: return "NonPositiveTarget";
    case ErrorKind::Overlap: return "Overlap";
    case ErrorKind::StagesNotSeparable: return "StagesNotSeparable";
    case ErrorKind::ProbeOnBoundary: return "ProbeOnBoundary";
  }
  return "Unknown";
}

std::string_view to_string(ErrorFamily family) {
  switch (family) {
    case ErrorFamily::Validation: return "validation";
    case ErrorFamily::Numerical: return "numerical";
    case ErrorFamily::Precondition: return "precondition";
  }
  return "unknown";
}

ErrorFamily family_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidGeometry:
    case ErrorKind::InvalidConfig:
    case ErrorKind::EmptyRegion:
    case ErrorKind::PathMismatch:
    case ErrorKind::UnsupportedDomain:
      return ErrorFamily::Validation;
    case ErrorKind::NonFiniteValue:
    case ErrorKind::QuadratureInconclusive:
    case ErrorKind::NoConvergence:
    case ErrorKind::IllConditioned:
    case ErrorKind::TargetNonFinite:
    case ErrorKind::DegreeCapExceeded:
    case ErrorKind::SingularJacobian:
    case ErrorKind::StepUnderflow:
    case ErrorKind::BranchAmbiguity:
      return ErrorFamily::Numerical;
    default:
      return ErrorFamily::Precondition;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace univalent
