#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bmc {

enum class ErrorKind {
  InvalidArgument,
  InvalidPose,
  DegenerateVector,
  DegenerateBasis,
  DegeneratePalm,
  DegenerateBone,
  GimbalDegenerate,
  InsufficientPoints,
  DegenerateDistribution,
  InvalidHull,
  InsufficientData,
  DegenerateSample,
  IoError,
  SchemaError,
  BehindCamera,
  DegenerateReference,
  NoPositiveRoot,
  ComplexRoots,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library. `index` carries the offending
// bone, joint or sample index when one is known.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<int> index = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<int> index() const noexcept { return index_; }

  // True for the geometric degeneracies that lenient loss evaluation
  // absorbs into a constant penalty.
  bool is_degeneracy() const noexcept;

 private:
  ErrorKind kind_;
  std::optional<int> index_;
};

}  // namespace bmc
