#pragma once

// Per-bone local frames and flexion/abduction angles of the 15 finger bones.
//
// PIP frames come from the palm: z is the normalized parent root bone and x
// is a negated palm plane normal. Frames of the DIP and TIP rows are the
// parent frame rotated by the parent bone's angles, which makes the angles
// independent of the global pose.
//
// Angle conventions, for a bone b expressed in its frame as (bx, by, bz):
//   flexion   = angle of (bx, 0, bz) from z, negative when bx < 0, in [-pi, pi]
//   abduction = angle of b from (bx, 0, bz), negative when by < 0, in [-pi/2, pi/2]
// The inverse map is d = (cos a sin f, sin a, cos a cos f).

#include <array>
#include <numbers>

#include "bmc/palm_structure.hpp"

namespace bmc {

enum class DegeneracyMode { Strict, Lenient };

template <typename T>
struct FrameT {
  Vec3<T> x;
  Vec3<T> y;
  Vec3<T> z;
};

using BoneFrame = FrameT<double>;

template <typename T>
struct AnglePairT {
  T flexion{};
  T abduction{};
};

struct AnglePair {
  double flexion = 0.0;
  double abduction = 0.0;
  bool operator==(const AnglePair&) const = default;
};

template <typename T>
Vec3<T> to_local(const FrameT<T>& frame, const Vec3<T>& v) {
  return {dot(v, frame.x), dot(v, frame.y), dot(v, frame.z)};
}

// PIP-bone frames of all five fingers.
template <typename T>
std::array<FrameT<T>, 5> compute_pip_frames(const Bones<T>& bones,
                                            const PalmDescriptorT<T>& palm) {
  const auto& n = palm.plane_normals;
  const std::array<Vec3<T>, 5> x_axes = {
      -n[0],
      -n[1],
      -normalized(n[2] + n[1], ErrorKind::DegeneratePalm, 2),
      -normalized(n[3] + n[2], ErrorKind::DegeneratePalm, 3),
      -n[3],
  };
  std::array<FrameT<T>, 5> frames;
  for (std::size_t f = 0; f < 5; ++f) {
    FrameT<T>& frame = frames[f];
    frame.z = normalized(bones[f], ErrorKind::DegeneratePalm, static_cast<int>(f));
    frame.x = x_axes[f];
    frame.y = normalized(cross(frame.z, frame.x), ErrorKind::DegeneratePalm,
                         static_cast<int>(f));
  }
  return frames;
}

std::array<BoneFrame, 5> pip_frames(const BoneSet& bones, const PalmDescriptor& palm);

template <typename T>
struct BoneAnglesT {
  AnglePairT<T> angles;
  FrameT<T> child_frame;  // frame of the next bone along the chain
  bool gimbal = false;
};

// Angles of `bone` in `frame` plus the propagated frame for the child bone.
// A bone along the frame's y axis has no flexion direction: in strict mode
// that raises GimbalDegenerate, in lenient mode flexion is taken as 0.
template <typename T>
BoneAnglesT<T> bone_angles(const Vec3<T>& bone, const FrameT<T>& frame,
                           DegeneracyMode mode, int bone_index = -1) {
  const std::optional<int> where =
      bone_index >= 0 ? std::optional<int>(bone_index) : std::nullopt;
  const Vec3<T> local = to_local(frame, bone);
  const T length = norm(local);
  if (math::value_of(length) < kEpsilon) {
    throw Error(ErrorKind::DegenerateBone, "finger bone shorter than epsilon", where);
  }
  const T planar = math::sqrt(local.x * local.x + local.z * local.z);

  BoneAnglesT<T> out;
  T cos_f, sin_f;
  if (math::value_of(planar) < kEpsilon) {
    if (mode == DegeneracyMode::Strict) {
      throw Error(ErrorKind::GimbalDegenerate, "bone parallel to frame y axis", where);
    }
    out.gimbal = true;
    out.angles.flexion = math::kink_zero(planar);
    out.angles.abduction = math::signed_angle(local.y, planar);
    cos_f = T(1.0);
    sin_f = T(0.0);
  } else {
    out.angles.flexion = math::signed_angle(local.x, local.z);
    out.angles.abduction = math::signed_angle(local.y, planar);
    cos_f = local.z / planar;
    sin_f = local.x / planar;
  }
  const T cos_a = planar / length;
  const T sin_a = local.y / length;

  const Vec3<T> flexed_z = sin_f * frame.x + cos_f * frame.z;
  out.child_frame.x = cos_f * frame.x - sin_f * frame.z;
  out.child_frame.y = cos_a * frame.y - sin_a * flexed_z;
  out.child_frame.z = cos_a * flexed_z + sin_a * frame.y;
  return out;
}

// Angles of a bone in a frame (strict). Throws DegenerateBone or
// GimbalDegenerate.
AnglePair extract_angles(const Vec3d& bone, const BoneFrame& frame);

// Angles of a frame-local bone before the octant sign lookup: both values
// are unsigned, flexion in [0, pi] and abduction in [0, pi/2].
AnglePair unsigned_angles(const Vec3d& local_bone);

// Sign lookup: negate flexion if bx < 0, abduction if by < 0.
AnglePair octant_lookup(const AnglePair& unsigned_pair, const Vec3d& local_bone);

// Frame-local unit direction for an angle pair.
Vec3d reconstruct_direction(const AnglePair& angles);

// Child frame: parent rotated by flexion about its y axis, then by
// abduction about the flexed -x axis.
BoneFrame propagate_frame(const BoneFrame& parent, const AnglePair& angles);

template <typename T>
struct FingerAnglesT {
  std::array<AnglePairT<T>, kNumFingerBones> angles;
  std::array<bool, kNumFingerBones> gimbal{};
};

// Angles of all 15 finger bones, ordered like bones 5..19.
template <typename T>
FingerAnglesT<T> compute_finger_angles(const Bones<T>& bones,
                                       const PalmDescriptorT<T>& palm,
                                       DegeneracyMode mode) {
  FingerAnglesT<T> out;
  const auto frames = compute_pip_frames(bones, palm);
  for (int f = 0; f < kNumFingers; ++f) {
    FrameT<T> frame = frames[static_cast<std::size_t>(f)];
    for (int level = 0; level < 3; ++level) {
      const int bone = finger_bone(f, level);
      const auto result =
          bone_angles(bones[static_cast<std::size_t>(bone)], frame, mode, bone);
      const auto k = static_cast<std::size_t>(3 * f + level);
      out.angles[k] = result.angles;
      out.gimbal[k] = result.gimbal;
      frame = result.child_frame;
    }
  }
  return out;
}

struct FingerAngles {
  std::array<AnglePair, kNumFingerBones> angles;
  std::array<bool, kNumFingerBones> gimbal{};
};

FingerAngles all_finger_angles(const HandPose& pose,
                               DegeneracyMode mode = DegeneracyMode::Strict);

// Forward kinematics: rebuilds a pose from its root joint, root bones,
// finger-bone lengths and angles (same order as all_finger_angles).
HandPose synthesize_pose(const Vec3d& root, const std::array<Vec3d, 5>& root_bones,
                         const std::array<double, kNumFingerBones>& lengths,
                         const std::array<AnglePair, kNumFingerBones>& angles);

}  // namespace bmc
