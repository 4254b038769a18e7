#pragma once

// Canonical 21-joint right-hand skeleton and shared geometric primitives.
//
// Joint layout (0-based):
//   0                 root (wrist / CMC)
//   1 + 4f .. 4 + 4f  finger f's MCP, PIP, DIP, TIP, f = 0..4
// Fingers are ordered thumb, index, middle, ring, pinky.
//
// Bone layout (0-based):
//   0..4    root bones, root -> MCP of finger 0..4
//   5..19   finger bones, finger-major, (PIP, DIP, TIP) per finger
// Each bone is child joint minus parent joint.

#include <array>
#include <cmath>

#include "bmc/error.hpp"
#include "bmc/vec3.hpp"

namespace bmc {

inline constexpr int kNumJoints = 21;
inline constexpr int kNumBones = 20;
inline constexpr int kNumFingers = 5;
inline constexpr int kNumRootBones = 5;
inline constexpr int kNumFingerBones = 15;
inline constexpr int kRootJoint = 0;
inline constexpr int kNoParent = -1;

// Degeneracy threshold for every normalization, in pose length units.
inline constexpr double kEpsilon = 1e-8;

enum class Finger { Thumb = 0, Index, Middle, Ring, Pinky };

enum class Phalanx { Proximal = 0, Middle = 1, Distal = 2 };

constexpr int mcp_joint(int finger) { return 1 + 4 * finger; }

constexpr int finger_bone(int finger, int level) {
  return kNumRootBones + 3 * finger + level;
}

// Joint at the tip (child end) of a bone.
constexpr int bone_child_joint(int bone) {
  if (bone < kNumRootBones) {
    return mcp_joint(bone);
  }
  const int f = (bone - kNumRootBones) / 3;
  const int level = (bone - kNumRootBones) % 3;
  return mcp_joint(f) + level + 1;
}

// Joint at the base (parent end) of a bone.
constexpr int bone_parent_joint(int bone) {
  if (bone < kNumRootBones) {
    return kRootJoint;
  }
  return bone_child_joint(bone) - 1;
}

// Parent bone of a bone, kNoParent for root bones.
constexpr int parent_bone(int bone) {
  if (bone < kNumRootBones) {
    return kNoParent;
  }
  const int f = (bone - kNumRootBones) / 3;
  const int level = (bone - kNumRootBones) % 3;
  return level == 0 ? f : bone - 1;
}

template <typename T>
using Joints = std::array<Vec3<T>, kNumJoints>;

template <typename T>
using Bones = std::array<Vec3<T>, kNumBones>;

// A validated right-hand pose: 21 joints with finite coordinates.
class HandPose {
 public:
  HandPose() = default;
  explicit HandPose(const Joints<double>& joints);

  // Left-hand input is mirrored onto the right-hand model (x negated).
  static HandPose from_left_hand(const Joints<double>& joints);

  const Joints<double>& joints() const { return joints_; }
  const Vec3d& operator[](int i) const {
    return joints_[static_cast<std::size_t>(i)];
  }

 private:
  Joints<double> joints_{};
};

struct BoneSet {
  Bones<double> bones{};

  const Vec3d& operator[](int i) const {
    return bones[static_cast<std::size_t>(i)];
  }
  static constexpr int parent(int bone) { return parent_bone(bone); }
};

// Closed interval [lower, upper] used by the interval penalty.
struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  // Throws InvalidArgument unless lower <= upper and both are finite.
  static Interval make(double lower, double upper);
  bool contains(double x) const { return lower <= x && x <= upper; }
  bool operator==(const Interval&) const = default;
};

template <typename T>
Bones<T> bones_from_joints(const Joints<T>& joints) {
  Bones<T> bones;
  for (int b = 0; b < kNumBones; ++b) {
    bones[static_cast<std::size_t>(b)] =
        joints[static_cast<std::size_t>(bone_child_joint(b))] -
        joints[static_cast<std::size_t>(bone_parent_joint(b))];
  }
  return bones;
}

BoneSet bones_from_pose(const HandPose& pose);

// norm(v), or throws `kind` (with `index`) when |v| < kEpsilon.
template <typename T>
Vec3<T> normalized(const Vec3<T>& v, ErrorKind kind = ErrorKind::DegenerateVector,
                   int index = -1) {
  const T n = norm(v);
  if (math::value_of(n) < kEpsilon) {
    throw Error(kind, "vector norm below epsilon",
                index >= 0 ? std::optional<int>(index) : std::nullopt);
  }
  return v / n;
}

// Angle in [0, pi] between two vectors. Evaluated as
// atan2(|v1 x v2|, v1 . v2), which equals the clamped arccos of the
// normalized dot product but keeps full precision near 0 and pi.
template <typename T>
T angle_between(const Vec3<T>& v1, const Vec3<T>& v2) {
  if (math::value_of(norm(v1)) < kEpsilon ||
      math::value_of(norm(v2)) < kEpsilon) {
    throw Error(ErrorKind::DegenerateVector, "angle of a zero-length vector");
  }
  return math::atan2(norm(cross(v1, v2)), dot(v1, v2));
}

double angle_between(const Vec3d& v1, const Vec3d& v2);

// max(lower - x, 0) + max(x - upper, 0). At x == lower or x == upper the
// returned zero is marked as a kink (zero subgradient).
template <typename T>
T interval_penalty(const T& x, const Interval& spec) {
  if (x < T(spec.lower)) {
    return T(spec.lower) - x;
  }
  if (x > T(spec.upper)) {
    return x - T(spec.upper);
  }
  if (math::value_of(x) == spec.lower || math::value_of(x) == spec.upper) {
    return math::kink_zero(x);
  }
  return T(0.0);
}

double interval_penalty(double x, const Interval& spec);

// Orthogonal projection of v onto span{x, y}. x and y need not be
// orthonormal, only independent: |x cross y| >= kEpsilon.
Vec3d project_onto_plane(const Vec3d& v, const Vec3d& x, const Vec3d& y);

}  // namespace bmc
