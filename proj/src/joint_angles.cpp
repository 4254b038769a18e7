#include "bmc/joint_angles.hpp"

#include <cmath>

namespace bmc {

std::array<BoneFrame, 5> pip_frames(const BoneSet& bones, const PalmDescriptor& palm) {
  return compute_pip_frames(bones.bones, palm);
}

AnglePair extract_angles(const Vec3d& bone, const BoneFrame& frame) {
  const auto result = bone_angles(bone, frame, DegeneracyMode::Strict);
  return {result.angles.flexion, result.angles.abduction};
}

AnglePair unsigned_angles(const Vec3d& local_bone) {
  const Vec3d ex{1.0, 0.0, 0.0};
  const Vec3d ez{0.0, 0.0, 1.0};
  const Vec3d planar = project_onto_plane(local_bone, ex, ez);
  return {angle_between(planar, ez), angle_between(planar, local_bone)};
}

AnglePair octant_lookup(const AnglePair& unsigned_pair, const Vec3d& local_bone) {
  AnglePair out = unsigned_pair;
  if (local_bone.x < 0.0) {
    out.flexion = -out.flexion;
  }
  if (local_bone.y < 0.0) {
    out.abduction = -out.abduction;
  }
  return out;
}

Vec3d reconstruct_direction(const AnglePair& angles) {
  const double cf = std::cos(angles.flexion);
  const double sf = std::sin(angles.flexion);
  const double ca = std::cos(angles.abduction);
  const double sa = std::sin(angles.abduction);
  return {ca * sf, sa, ca * cf};
}

BoneFrame propagate_frame(const BoneFrame& parent, const AnglePair& angles) {
  const double cf = std::cos(angles.flexion);
  const double sf = std::sin(angles.flexion);
  const double ca = std::cos(angles.abduction);
  const double sa = std::sin(angles.abduction);
  const Vec3d flexed_z = sf * parent.x + cf * parent.z;
  BoneFrame child;
  child.x = cf * parent.x - sf * parent.z;
  child.y = ca * parent.y - sa * flexed_z;
  child.z = ca * flexed_z + sa * parent.y;
  return child;
}

FingerAngles all_finger_angles(const HandPose& pose, DegeneracyMode mode) {
  const Bones<double> bones = bones_from_joints(pose.joints());
  const PalmDescriptor palm = compute_palm(bones);
  const auto raw = compute_finger_angles(bones, palm, mode);
  FingerAngles out;
  for (std::size_t k = 0; k < kNumFingerBones; ++k) {
    out.angles[k] = {raw.angles[k].flexion, raw.angles[k].abduction};
    out.gimbal[k] = raw.gimbal[k];
  }
  return out;
}

HandPose synthesize_pose(const Vec3d& root, const std::array<Vec3d, 5>& root_bones,
                         const std::array<double, kNumFingerBones>& lengths,
                         const std::array<AnglePair, kNumFingerBones>& angles) {
  Bones<double> bones{};
  for (std::size_t f = 0; f < 5; ++f) {
    bones[f] = root_bones[f];
  }
  const PalmDescriptor palm = compute_palm(bones);
  const auto frames = compute_pip_frames(bones, palm);

  Joints<double> joints{};
  joints[kRootJoint] = root;
  for (int f = 0; f < kNumFingers; ++f) {
    const auto fi = static_cast<std::size_t>(f);
    Vec3d position = root + root_bones[fi];
    joints[static_cast<std::size_t>(mcp_joint(f))] = position;
    BoneFrame frame = frames[fi];
    for (int level = 0; level < 3; ++level) {
      const auto k = static_cast<std::size_t>(3 * f + level);
      if (!(lengths[k] > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "bone length must be positive",
                    finger_bone(f, level));
      }
      const Vec3d d = reconstruct_direction(angles[k]);
      const Vec3d bone = lengths[k] * (d.x * frame.x + d.y * frame.y + d.z * frame.z);
      position = position + bone;
      joints[static_cast<std::size_t>(mcp_joint(f) + level + 1)] = position;
      frame = propagate_frame(frame, angles[k]);
    }
  }
  return HandPose(joints);
}

}  // namespace bmc
