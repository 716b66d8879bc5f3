#include "riesz/errors.hpp"

namespace riesz {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InsufficientJetOrder: return "InsufficientJetOrder";
    case ErrorKind::IllConditionedFit: return "IllConditionedFit";
    case ErrorKind::NonSimplePole: return "NonSimplePole";
    case ErrorKind::DegenerateParameterization: return "DegenerateParameterization";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::UnknownShape: return "UnknownShape";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::ExponentNotConvergent: return "ExponentNotConvergent";
    case ErrorKind::MethodsDisagree: return "MethodsDisagree";
    case ErrorKind::PoleAt: return "PoleAt";
    case ErrorKind::ExcludedExponent: return "ExcludedExponent";
    case ErrorKind::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::CenterTooClose: return "CenterTooClose";
    case ErrorKind::FitUnstable: return "FitUnstable";
  }
  return "Unknown";
}

bool is_config_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownShape:
    case ErrorKind::InvalidParams:
    case ErrorKind::ExponentNotConvergent:
    case ErrorKind::ExcludedExponent:
    case ErrorKind::ExponentOutOfRange:
    case ErrorKind::UnsupportedDimension:
    case ErrorKind::CenterTooClose:
    case ErrorKind::PoleAt:
      return true;
    default:
      return false;
  }
}

}  // namespace riesz
