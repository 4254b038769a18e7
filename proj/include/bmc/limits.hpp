#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "bmc/angle_hull.hpp"

namespace bmc {

struct LimitMetadata {
  std::string source;
  std::size_t sample_count = 0;
  std::string length_unit = "m";
  bool operator==(const LimitMetadata&) const = default;
};

// Every feasibility parameter of the model. Curvature limits are in
// 1/length units and only valid for poses in `metadata.length_unit`.
struct LimitSet {
  std::array<Interval, kNumBones> bone_length{};
  std::array<Interval, 4> curvature{};
  std::array<Interval, 4> angular_distance{};
  std::array<AngleHull, kNumFingerBones> angle_hulls{};
  LimitMetadata metadata;

  PalmLimits palm() const { return {curvature, angular_distance}; }
  bool operator==(const LimitSet&) const = default;
};

inline constexpr int kLimitFileVersion = 1;

struct FitOptions {
  // Intervals span the [quantile, 1 - quantile] empirical quantiles.
  double quantile = 0.0;
  // Lenient: degenerate samples are skipped and reported.
  DegeneracyMode mode = DegeneracyMode::Strict;
  HullOptions hull;
  std::string source = "fit";
  std::string length_unit = "m";
  // Radius of the decagon each angle point is dilated by when a bone's
  // angle points are collinear (e.g. a corpus of identical poses).
  double degenerate_hull_radius = 1e-6;
};

struct FitResult {
  LimitSet limits;
  std::vector<std::size_t> skipped;  // indices of skipped degenerate samples
};

// Throws InsufficientData (< 10 usable samples) or, in strict mode,
// DegenerateSample with the sample index.
FitResult fit_limits(std::span<const HandPose> corpus, const FitOptions& options = {});

// Linearly interpolated empirical quantile of unsorted values, q in [0, 1].
double empirical_quantile(std::vector<double> values, double q);

nlohmann::json limits_to_json(const LimitSet& limits);

// Throws SchemaError naming the offending field path.
LimitSet limits_from_json(const nlohmann::json& doc);

// Throws IoError or SchemaError.
void save_limits(const LimitSet& limits, const std::filesystem::path& path);
LimitSet load_limits(const std::filesystem::path& path);

}  // namespace bmc
