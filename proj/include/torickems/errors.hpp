#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace torickems {

enum class ErrorKind {
  InvalidInput,
  NotReflexive,
  NotSmooth,
  NotComplete,
  DimensionUnsupported,
  BoundaryPoint,
  NoConvergence,
  HessianSingular,
  NotKaehler,
  TooManyOrbits,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotReflexive: return "NotReflexive";
    case ErrorKind::NotSmooth: return "NotSmooth";
    case ErrorKind::NotComplete: return "NotComplete";
    case ErrorKind::DimensionUnsupported: return "DimensionUnsupported";
    case ErrorKind::BoundaryPoint: return "BoundaryPoint";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::HessianSingular: return "HessianSingular";
    case ErrorKind::NotKaehler: return "NotKaehler";
    case ErrorKind::TooManyOrbits: return "TooManyOrbits";
  }
  return "Unknown";
}

/// Library error carrying a machine-readable kind; what() is "Kind: detail".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace torickems
