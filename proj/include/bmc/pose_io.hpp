#pragma once

// JSON readers and writers for pose files and 2.5D sample files.
//
// Pose file: either a bare array of poses or {"poses": [...]}; a pose is an
// array of 21 [x, y, z] triples in canonical joint order.
// 2.5D file: either a bare array or {"samples": [...]}; a sample is
// {"uv": [[u, v] x 21], "relative_depth": [21 numbers]}.

#include <filesystem>
#include <vector>

#include "json.hpp"

#include "bmc/camera_depth.hpp"

namespace bmc {

struct PoseReadOptions {
  // Input joints belong to a left hand and are mirrored (x negated).
  bool left_hand = false;
};

// Throws SchemaError with the JSON path, and the sample index attached.
std::vector<HandPose> poses_from_json(const nlohmann::json& doc,
                                      const PoseReadOptions& options = {});
std::vector<HandPose> load_poses(const std::filesystem::path& path,
                                 const PoseReadOptions& options = {});

nlohmann::json pose_to_json(const HandPose& pose);
nlohmann::json poses_to_json(const std::vector<HandPose>& poses);
void save_poses(const std::vector<HandPose>& poses, const std::filesystem::path& path);

std::vector<TwoPointFiveD> samples_25d_from_json(const nlohmann::json& doc);
std::vector<TwoPointFiveD> load_samples_25d(const std::filesystem::path& path);
nlohmann::json sample_25d_to_json(const TwoPointFiveD& sample);

// Parses a whole file; IoError if unreadable, SchemaError if not JSON.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace bmc
