#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace riesz {

enum class ErrorKind {
  InsufficientJetOrder,
  IllConditionedFit,
  NonSimplePole,
  DegenerateParameterization,
  QuadratureNotConverged,
  UnknownShape,
  InvalidParams,
  ExponentNotConvergent,
  MethodsDisagree,
  PoleAt,
  ExcludedExponent,
  ExponentOutOfRange,
  UnsupportedDimension,
  CenterTooClose,
  FitUnstable,
};

std::string_view to_string(ErrorKind kind);

// Configuration problems map to CLI exit code 2, everything else to 3.
bool is_config_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace riesz
