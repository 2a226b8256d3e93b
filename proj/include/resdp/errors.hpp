#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace resdp {

enum class ErrorKind {
  DegenerateBasis,
  NotSkewHermitian,
  NotInGroup,
  SingularEmbed,
  FiberMismatch,
  NotInImage,
  OnAxis,
  ZeroPoint,
  OffDomain,
  NoConvergence,
  EmptyFiber,
  DomainExit,
  StepRejected,
  BadParams,
  IoError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateBasis: return "DegenerateBasis";
    case ErrorKind::NotSkewHermitian: return "NotSkewHermitian";
    case ErrorKind::NotInGroup: return "NotInGroup";
    case ErrorKind::SingularEmbed: return "SingularEmbed";
    case ErrorKind::FiberMismatch: return "FiberMismatch";
    case ErrorKind::NotInImage: return "NotInImage";
    case ErrorKind::OnAxis: return "OnAxis";
    case ErrorKind::ZeroPoint: return "ZeroPoint";
    case ErrorKind::OffDomain: return "OffDomain";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::EmptyFiber: return "EmptyFiber";
    case ErrorKind::DomainExit: return "DomainExit";
    case ErrorKind::StepRejected: return "StepRejected";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library. `time` is set for trajectory errors
/// (DomainExit, StepRejected) and is NaN otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double time = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), time_(time) {}

  ErrorKind kind() const noexcept { return kind_; }
  double time() const noexcept { return time_; }

 private:
  ErrorKind kind_;
  double time_;
};

}  // namespace resdp
