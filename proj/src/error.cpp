#include "bmc/error.hpp"

namespace bmc {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidPose: return "InvalidPose";
    case ErrorKind::DegenerateVector: return "DegenerateVector";
    case ErrorKind::DegenerateBasis: return "DegenerateBasis";
    case ErrorKind::DegeneratePalm: return "DegeneratePalm";
    case ErrorKind::DegenerateBone: return "DegenerateBone";
    case ErrorKind::GimbalDegenerate: return "GimbalDegenerate";
    case ErrorKind::InsufficientPoints: return "InsufficientPoints";
    case ErrorKind::DegenerateDistribution: return "DegenerateDistribution";
    case ErrorKind::InvalidHull: return "InvalidHull";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::DegenerateSample: return "DegenerateSample";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::BehindCamera: return "BehindCamera";
    case ErrorKind::DegenerateReference: return "DegenerateReference";
    case ErrorKind::NoPositiveRoot: return "NoPositiveRoot";
    case ErrorKind::ComplexRoots: return "ComplexRoots";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorKind kind, const std::string& message,
                           std::optional<int> index) {
  std::string out(to_string(kind));
  if (index) {
    out += " [" + std::to_string(*index) + "]";
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message,
             std::optional<int> index)
    : std::runtime_error(format_message(kind, message, index)),
      kind_(kind),
      index_(index) {}

bool Error::is_degeneracy() const noexcept {
  switch (kind_) {
    case ErrorKind::DegenerateVector:
    case ErrorKind::DegenerateBasis:
    case ErrorKind::DegeneratePalm:
    case ErrorKind::DegenerateBone:
    case ErrorKind::GimbalDegenerate:
      return true;
    default:
      return false;
  }
}

}  // namespace bmc
